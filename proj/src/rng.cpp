#include "gdnn/rng.hpp"

#include <cmath>

#include "gdnn/errors.hpp"

namespace gd {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Decorrelate streams by folding a mixed stream id into the splitmix
    // state before expanding it to the 256-bit xoshiro state.
    std::uint64_t sm = seed ^ mix64(0x9E3779B97F4A7C15ULL * (stream_id + 1));
    s_[0] = splitmix64(sm);
    s_[1] = splitmix64(sm);
    s_[2] = splitmix64(sm);
    s_[3] = splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is absorbing
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::next_double01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    if (!(lo < hi)) throw ParamError("uniform: need lo < hi");
    double v = lo + (hi - lo) * next_double01();
    if (v >= hi) v = std::nextafter(hi, lo);  // rounding at the top end
    return v;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_double01();
    while (u1 <= 0.0) u1 = next_double01();
    const double u2 = next_double01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) throw ParamError("next_below: n must be positive");
    // Lemire's multiply-shift rejection; unbiased without a modulo loop.
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t thresh = (0 - n) % n;
        while (lo < thresh) {
            x = next_u64();
            m = static_cast<unsigned __int128>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

void RngStream::fill_uniform(double* out, std::size_t n, double lo, double hi) {
    for (std::size_t i = 0; i < n; ++i) out[i] = uniform(lo, hi);
}

void RngStream::fill_normal(double* out, std::size_t n, double mean, double stddev) {
    for (std::size_t i = 0; i < n; ++i) out[i] = normal(mean, stddev);
}

void RngStream::fill_bernoulli(std::uint8_t* out, std::size_t n, double p_one) {
    if (p_one < 0.0 || p_one > 1.0) throw ParamError("fill_bernoulli: p outside [0,1]");
    for (std::size_t i = 0; i < n; ++i) out[i] = next_double01() < p_one ? 1 : 0;
}

Matrix sample_uniform(RngStream& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
    Matrix m(rows, cols);
    rng.fill_uniform(m.data().data(), rows * cols, lo, hi);
    return m;
}

Matrix sample_normal(RngStream& rng, std::size_t rows, std::size_t cols, double mean, double stddev) {
    Matrix m(rows, cols);
    rng.fill_normal(m.data().data(), rows * cols, mean, stddev);
    return m;
}

BinaryVector sample_bernoulli(RngStream& rng, std::size_t n, double p_one) {
    BinaryVector v(n);
    rng.fill_bernoulli(v.data(), n, p_one);
    return v;
}

}  // namespace gd
