#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdnn/matrix.hpp"

namespace gd {

struct Dataset {
    Matrix features;          // num_samples x dim, values in [0,1]
    std::vector<int> labels;  // class indices
    int num_classes = 0;

    std::size_t size() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }
    void validate() const;  // throws DataError on any violated invariant
};

// IDX pair (big-endian, magics 0x803 images / 0x801 labels). Pixels are
// flattened row-major and scaled by 1/255.
Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path);

// CIFAR-10 binary batches: 3073-byte records, 1 label byte + 3072 pixels.
// An empty file contributes zero rows (callers get a warning on stderr).
Dataset load_cifar10_bin(const std::vector<std::string>& paths);

// n rows without replacement, stratified by class so counts stay within one
// of n/num_classes, seeded and deterministic.
Dataset subsample(const Dataset& d, std::size_t n, std::uint64_t seed);

// Linear ground truth for the theory suite: x ~ N(0, I), y = W_true x.
// Rows of xs/ys are samples, so ys = xs * W_true^T.
struct SyntheticRegression {
    Matrix W_true;  // d1 x d2
    Matrix xs;      // n x d2
    Matrix ys;      // n x d1
};
SyntheticRegression synthetic_regression(std::size_t d1, std::size_t d2, std::size_t n,
                                         std::uint64_t seed);

}  // namespace gd
