#include "gdnn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace gd {

namespace {

int g_max_threads = 1;

std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// C rows [r0, r1) += A[r0:r1,:] * B. Four output rows per pass so each
// loaded B row feeds four FMA streams; the j loop vectorizes.
void nn_rows(const Matrix& a, const Matrix& b, Matrix& c, std::size_t r0, std::size_t r1) {
    const std::size_t kk = a.cols();
    const std::size_t n = b.cols();
    std::size_t i = r0;
    for (; i + 4 <= r1; i += 4) {
        double* c0 = c.row(i);
        double* c1 = c.row(i + 1);
        double* c2 = c.row(i + 2);
        double* c3 = c.row(i + 3);
        const double* a0 = a.row(i);
        const double* a1 = a.row(i + 1);
        const double* a2 = a.row(i + 2);
        const double* a3 = a.row(i + 3);
        for (std::size_t k = 0; k < kk; ++k) {
            const double* br = b.row(k);
            const double x0 = a0[k];
            const double x1 = a1[k];
            const double x2 = a2[k];
            const double x3 = a3[k];
            for (std::size_t j = 0; j < n; ++j) {
                c0[j] += x0 * br[j];
                c1[j] += x1 * br[j];
                c2[j] += x2 * br[j];
                c3[j] += x3 * br[j];
            }
        }
    }
    for (; i < r1; ++i) {
        double* cr = c.row(i);
        const double* ar = a.row(i);
        for (std::size_t k = 0; k < kk; ++k) {
            const double x = ar[k];
            const double* br = b.row(k);
            for (std::size_t j = 0; j < n; ++j) cr[j] += x * br[j];
        }
    }
}

// C rows [r0, r1) += (A^T)[r0:r1,:] * B, reading A column r as the scalar
// stream. Same accumulation order per element as nn_rows.
void tn_rows(const Matrix& a, const Matrix& b, Matrix& c, std::size_t r0, std::size_t r1) {
    const std::size_t kk = a.rows();
    const std::size_t n = b.cols();
    std::size_t i = r0;
    for (; i + 4 <= r1; i += 4) {
        double* c0 = c.row(i);
        double* c1 = c.row(i + 1);
        double* c2 = c.row(i + 2);
        double* c3 = c.row(i + 3);
        for (std::size_t k = 0; k < kk; ++k) {
            const double* ar = a.row(k);
            const double* br = b.row(k);
            const double x0 = ar[i];
            const double x1 = ar[i + 1];
            const double x2 = ar[i + 2];
            const double x3 = ar[i + 3];
            for (std::size_t j = 0; j < n; ++j) {
                c0[j] += x0 * br[j];
                c1[j] += x1 * br[j];
                c2[j] += x2 * br[j];
                c3[j] += x3 * br[j];
            }
        }
    }
    for (; i < r1; ++i) {
        double* cr = c.row(i);
        for (std::size_t k = 0; k < kk; ++k) {
            const double x = a.row(k)[i];
            const double* br = b.row(k);
            for (std::size_t j = 0; j < n; ++j) cr[j] += x * br[j];
        }
    }
}

template <typename RowFn>
void run_sharded(std::size_t rows, std::size_t flops, RowFn fn) {
    const int want = g_max_threads;
    if (want <= 1 || rows < 8 || flops < (1u << 20)) {
        fn(0, rows);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(want, (rows + 3) / 4);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    // Chunks aligned to 4 rows so every worker hits the blocked path.
    const std::size_t chunk = ((rows / workers + 3) / 4) * 4;
    std::size_t r0 = 0;
    for (std::size_t w = 0; w < workers && r0 < rows; ++w) {
        const std::size_t r1 = std::min(rows, r0 + chunk);
        pool.emplace_back([=] { fn(r0, r1); });
        r0 = r1;
    }
    if (r0 < rows) fn(r0, rows);
    for (auto& t : pool) t.join();
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::checked(std::size_t rows, std::size_t cols, std::vector<double> data) {
    Matrix m(rows, cols, std::move(data));
    if (!m.all_finite()) throw NumericError("matrix contains NaN or Inf entries");
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void set_max_threads(int n) { g_max_threads = std::max(1, n); }
int max_threads() { return g_max_threads; }

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: " + shape_str(a) + " * " + shape_str(b));
    }
    Matrix c(a.rows(), b.cols());
    run_sharded(a.rows(), a.rows() * a.cols() * b.cols(),
                [&](std::size_t r0, std::size_t r1) { nn_rows(a, b, c, r0, r1); });
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: " + shape_str(a) + "^T * " + shape_str(b));
    }
    Matrix c(a.cols(), b.cols());
    run_sharded(a.cols(), a.cols() * a.rows() * b.cols(),
                [&](std::size_t r0, std::size_t r1) { tn_rows(a, b, c, r0, r1); });
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: " + shape_str(a) + " * " + shape_str(b) + "^T");
    }
    return matmul(a, transpose(b));
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    constexpr std::size_t kTile = 32;
    for (std::size_t r0 = 0; r0 < m.rows(); r0 += kTile) {
        const std::size_t r1 = std::min(m.rows(), r0 + kTile);
        for (std::size_t c0 = 0; c0 < m.cols(); c0 += kTile) {
            const std::size_t c1 = std::min(m.cols(), c0 + kTile);
            for (std::size_t r = r0; r < r1; ++r) {
                for (std::size_t c = c0; c < c1; ++c) t(c, r) = m(r, c);
            }
        }
    }
    return t;
}

double frobenius_norm_sq(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return s;
}

}  // namespace gd
