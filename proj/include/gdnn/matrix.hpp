#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gdnn/errors.hpp"

namespace gd {

using Vector = std::vector<double>;
using BinaryVector = std::vector<std::uint8_t>;

// Dense row-major matrix of doubles. Treated as immutable once built;
// the training loop owns the only copies it mutates.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);  // zero-filled
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    // Like the data constructor but rejects NaN/Inf entries.
    static Matrix checked(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    double* row(std::size_t r) { return data_.data() + r * cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool all_finite() const;
    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);     // a * b
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T * b
Matrix transpose(const Matrix& m);

double frobenius_norm_sq(const Matrix& m);

// Worker budget for the matmul kernels. Output rows are sharded across
// workers and each element keeps a fixed accumulation order, so results
// are byte-identical for any thread count. Default 1.
void set_max_threads(int n);
int max_threads();

}  // namespace gd
