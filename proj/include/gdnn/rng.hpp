#pragma once

// Deterministic RNG. xoshiro256++ seeded through splitmix64, so the same
// (seed, stream) pair reproduces the same draws on any platform. Streams
// are independent generators derived from one user seed; training hands a
// dedicated stream to each consumer (init, shuffle, per-layer masks) so
// adding a consumer never shifts the draws of another.

#include <cstdint>
#include <vector>

#include "gdnn/matrix.hpp"

namespace gd {

class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // Uniform in [0, 1): (next_u64() >> 11) * 2^-53.
    double next_double01();

    // Uniform in [lo, hi); result is clamped strictly below hi.
    double uniform(double lo, double hi);

    // Standard normal, Box-Muller with a cached spare.
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Unbiased integer in [0, n), Lemire style. n must be > 0.
    std::uint64_t next_below(std::uint64_t n);

    void fill_uniform(double* out, std::size_t n, double lo, double hi);
    void fill_normal(double* out, std::size_t n, double mean, double stddev);
    void fill_bernoulli(std::uint8_t* out, std::size_t n, double p_one);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t s_[4];
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

Matrix sample_uniform(RngStream& rng, std::size_t rows, std::size_t cols, double lo, double hi);
Matrix sample_normal(RngStream& rng, std::size_t rows, std::size_t cols, double mean, double stddev);
BinaryVector sample_bernoulli(RngStream& rng, std::size_t n, double p_one);

// Fisher-Yates, consumes exactly n-1 next_below() draws for n > 1.
template <typename T>
void shuffle_inplace(std::vector<T>& v, RngStream& rng) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
        std::swap(v[i], v[j]);
    }
}

}  // namespace gd
