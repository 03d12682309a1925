#include "onmf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

namespace onmf {

namespace {

std::string shape_str(std::size_t r, std::size_t c, bool transposed = false) {
    std::string s = std::to_string(r) + "x" + std::to_string(c);
    if (transposed) s += "^T";
    return s;
}

void require_same_shape(const char* op, std::size_t xr, std::size_t xc, std::size_t yr,
                        std::size_t yc) {
    if (xr != yr || xc != yc) {
        throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(xr, xc) + " vs " +
                         shape_str(yr, yc));
    }
}

// Splits [0, n) into contiguous chunks, one worker per chunk. Each output
// row is produced by exactly one thread, so results match the serial run.
template <typename Fn>
void parallel_rows(std::size_t n, const Fn& fn) {
    const int threads = kernel_threads();
    if (threads <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

int kernel_threads() {
    static const int cached = [] {
        const char* env = std::getenv("ORTHO_NMF_THREADS");
        if (env == nullptr) return 1;
        const long v = std::strtol(env, nullptr, 10);
        if (v < 1) return 1;
        const long hw = std::max(1u, std::thread::hardware_concurrency());
        return static_cast<int>(std::min(v, hw));
    }();
    return cached;
}

// ---- DenseMatrix ----------------------------------------------------------

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw ShapeError("DenseMatrix: " + std::to_string(values_.size()) +
                         " values for shape " + shape_str(rows_, cols_));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::constant(std::size_t rows, std::size_t cols, double value) {
    DenseMatrix m(rows, cols);
    std::fill(m.values_.begin(), m.values_.end(), value);
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

double DenseMatrix::max_entry() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::max(m, v);
    return m;
}

double DenseMatrix::min_entry() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::min(m, v);
    return m;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

bool DenseMatrix::all_nonneg() const {
    for (double v : values_)
        if (v < 0.0) return false;
    return true;
}

// ---- SparseMatrixCSR ------------------------------------------------------

SparseMatrixCSR::SparseMatrixCSR(std::size_t rows, std::size_t cols,
                                 std::vector<std::size_t> row_ptr,
                                 std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != values_.size() ||
        col_idx_.size() != values_.size()) {
        throw ShapeError("SparseMatrixCSR: inconsistent CSR arrays for shape " +
                         shape_str(rows_, cols_));
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        if (row_ptr_[i] > row_ptr_[i + 1]) {
            throw ShapeError("SparseMatrixCSR: row_ptr not nondecreasing at row " +
                             std::to_string(i));
        }
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            if (col_idx_[p] >= cols_) {
                throw ShapeError("SparseMatrixCSR: column index out of range at row " +
                                 std::to_string(i));
            }
            if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
                throw ShapeError("SparseMatrixCSR: columns not strictly increasing in row " +
                                 std::to_string(i));
            }
        }
    }
    for (double v : values_) {
        if (!(v >= 0.0)) {
            throw ShapeError("SparseMatrixCSR: stored values must be nonnegative");
        }
    }
}

SparseMatrixCSR SparseMatrixCSR::from_triplets(std::size_t rows, std::size_t cols,
                                               std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> row_ptr(rows + 1, 0);
    std::vector<std::size_t> col_idx;
    std::vector<double> values;
    col_idx.reserve(triplets.size());
    values.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const Triplet& t = triplets[k];
        if (t.row >= rows || t.col >= cols) {
            throw ShapeError("from_triplets: entry (" + std::to_string(t.row) + "," +
                             std::to_string(t.col) + ") outside " + shape_str(rows, cols));
        }
        if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
            throw ShapeError("from_triplets: duplicate entry (" + std::to_string(t.row) + "," +
                             std::to_string(t.col) + ")");
        }
        ++row_ptr[t.row + 1];
        col_idx.push_back(t.col);
        values.push_back(t.value);
    }
    for (std::size_t i = 0; i < rows; ++i) row_ptr[i + 1] += row_ptr[i];
    return SparseMatrixCSR(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrixCSR SparseMatrixCSR::from_dense(const DenseMatrix& dense) {
    std::vector<Triplet> triplets;
    for (std::size_t i = 0; i < dense.rows(); ++i)
        for (std::size_t j = 0; j < dense.cols(); ++j)
            if (dense(i, j) != 0.0) triplets.push_back({i, j, dense(i, j)});
    return from_triplets(dense.rows(), dense.cols(), std::move(triplets));
}

DenseMatrix SparseMatrixCSR::to_dense() const {
    DenseMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            out(i, col_idx_[p]) = values_[p];
    return out;
}

double SparseMatrixCSR::max_entry() const {
    double m = nnz() < rows_ * cols_ ? 0.0 : -std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::max(m, v);
    return m;
}

// ---- DataMatrix -----------------------------------------------------------

std::size_t DataMatrix::rows() const {
    return is_sparse() ? sparse().rows() : dense().rows();
}

std::size_t DataMatrix::cols() const {
    return is_sparse() ? sparse().cols() : dense().cols();
}

std::size_t DataMatrix::nnz() const {
    return is_sparse() ? sparse().nnz() : dense().size();
}

DenseMatrix DataMatrix::to_dense() const {
    return is_sparse() ? sparse().to_dense() : dense();
}

double DataMatrix::max_entry() const {
    return is_sparse() ? sparse().max_entry() : dense().max_entry();
}

void DataMatrix::for_each_entry(
    const std::function<void(std::size_t, std::size_t, double)>& fn) const {
    if (is_sparse()) {
        const SparseMatrixCSR& m = sparse();
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t p = m.row_ptr()[i]; p < m.row_ptr()[i + 1]; ++p)
                fn(i, m.col_idx()[p], m.values()[p]);
    } else {
        const DenseMatrix& m = dense();
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) fn(i, j, m(i, j));
    }
}

// ---- products -------------------------------------------------------------

DenseMatrix matmul(const DenseMatrix& lhs, const DenseMatrix& rhs, bool transpose_lhs,
                   bool transpose_rhs) {
    const std::size_t out_rows = transpose_lhs ? lhs.cols() : lhs.rows();
    const std::size_t inner = transpose_lhs ? lhs.rows() : lhs.cols();
    const std::size_t rhs_inner = transpose_rhs ? rhs.cols() : rhs.rows();
    const std::size_t out_cols = transpose_rhs ? rhs.rows() : rhs.cols();
    if (inner != rhs_inner) {
        throw ShapeError("matmul: inner dimensions disagree: lhs " +
                         shape_str(lhs.rows(), lhs.cols(), transpose_lhs) + " vs rhs " +
                         shape_str(rhs.rows(), rhs.cols(), transpose_rhs));
    }
    DenseMatrix out(out_rows, out_cols);
    parallel_rows(out_rows, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = 0; j < out_cols; ++j) {
                long double acc = 0.0L;
                for (std::size_t k = 0; k < inner; ++k) {
                    const double a = transpose_lhs ? lhs(k, i) : lhs(i, k);
                    const double b = transpose_rhs ? rhs(j, k) : rhs(k, j);
                    acc += static_cast<long double>(a) * b;
                }
                out(i, j) = static_cast<double>(acc);
            }
        }
    });
    return out;
}

DenseMatrix matmul(const SparseMatrixCSR& lhs, const DenseMatrix& rhs, bool transpose_lhs,
                   bool transpose_rhs) {
    const std::size_t inner = transpose_lhs ? lhs.rows() : lhs.cols();
    const std::size_t rhs_inner = transpose_rhs ? rhs.cols() : rhs.rows();
    const std::size_t out_cols = transpose_rhs ? rhs.rows() : rhs.cols();
    if (inner != rhs_inner) {
        throw ShapeError("matmul: inner dimensions disagree: lhs " +
                         shape_str(lhs.rows(), lhs.cols(), transpose_lhs) + " vs rhs " +
                         shape_str(rhs.rows(), rhs.cols(), transpose_rhs));
    }
    const auto& row_ptr = lhs.row_ptr();
    const auto& col_idx = lhs.col_idx();
    const auto& values = lhs.values();
    if (!transpose_lhs) {
        DenseMatrix out(lhs.rows(), out_cols);
        parallel_rows(lhs.rows(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                for (std::size_t j = 0; j < out_cols; ++j) {
                    long double acc = 0.0L;
                    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
                        const std::size_t k = col_idx[p];
                        const double b = transpose_rhs ? rhs(j, k) : rhs(k, j);
                        acc += static_cast<long double>(values[p]) * b;
                    }
                    out(i, j) = static_cast<double>(acc);
                }
            }
        });
        return out;
    }
    // A^T * R via scatter over stored entries; serial row-major entry order
    // keeps the accumulation order fixed.
    DenseMatrix out(lhs.cols(), out_cols);
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            const std::size_t k = col_idx[p];
            const double v = values[p];
            for (std::size_t j = 0; j < out_cols; ++j) {
                const double b = transpose_rhs ? rhs(j, i) : rhs(i, j);
                out(k, j) += v * b;
            }
        }
    }
    return out;
}

DenseMatrix matmul(const DataMatrix& lhs, const DenseMatrix& rhs, bool transpose_lhs,
                   bool transpose_rhs) {
    return lhs.is_sparse() ? matmul(lhs.sparse(), rhs, transpose_lhs, transpose_rhs)
                           : matmul(lhs.dense(), rhs, transpose_lhs, transpose_rhs);
}

// ---- norms and entrywise ops ----------------------------------------------

double frobenius_sq_diff(const DenseMatrix& x, const DenseMatrix& y) {
    require_same_shape("frobenius_sq_diff", x.rows(), x.cols(), y.rows(), y.cols());
    long double acc = 0.0L;
    const auto& xv = x.values();
    const auto& yv = y.values();
    for (std::size_t k = 0; k < xv.size(); ++k) {
        const long double d = static_cast<long double>(xv[k]) - yv[k];
        acc += d * d;
    }
    return static_cast<double>(acc);
}

double frobenius_sq_diff(const SparseMatrixCSR& x, const DenseMatrix& y) {
    require_same_shape("frobenius_sq_diff", x.rows(), x.cols(), y.rows(), y.cols());
    long double acc = 0.0L;
    const auto& row_ptr = x.row_ptr();
    const auto& col_idx = x.col_idx();
    const auto& values = x.values();
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t p = row_ptr[i];
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double xv = 0.0;
            if (p < row_ptr[i + 1] && col_idx[p] == j) xv = values[p++];
            const long double d = static_cast<long double>(xv) - y(i, j);
            acc += d * d;
        }
    }
    return static_cast<double>(acc);
}

double frobenius_sq_diff(const DataMatrix& x, const DenseMatrix& y) {
    return x.is_sparse() ? frobenius_sq_diff(x.sparse(), y) : frobenius_sq_diff(x.dense(), y);
}

DenseMatrix hadamard(const DenseMatrix& x, const DenseMatrix& y) {
    require_same_shape("hadamard", x.rows(), x.cols(), y.rows(), y.cols());
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] = x.values()[k] * y.values()[k];
    return out;
}

DenseMatrix add(const DenseMatrix& x, const DenseMatrix& y) {
    require_same_shape("add", x.rows(), x.cols(), y.rows(), y.cols());
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] = x.values()[k] + y.values()[k];
    return out;
}

DenseMatrix subtract(const DenseMatrix& x, const DenseMatrix& y) {
    require_same_shape("subtract", x.rows(), x.cols(), y.rows(), y.cols());
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] = x.values()[k] - y.values()[k];
    return out;
}

DenseMatrix scaled(const DenseMatrix& x, double factor) {
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] = factor * x.values()[k];
    return out;
}

DenseMatrix add_scaled(const DenseMatrix& x, const DenseMatrix& y, double factor) {
    require_same_shape("add_scaled", x.rows(), x.cols(), y.rows(), y.cols());
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < out.size(); ++k)
        out.values()[k] = x.values()[k] + factor * y.values()[k];
    return out;
}

double frobenius_sq_diff_identity(const DenseMatrix& x) {
    if (x.rows() != x.cols()) {
        throw ShapeError("frobenius_sq_diff_identity: matrix is " +
                         shape_str(x.rows(), x.cols()) + ", expected square");
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const long double d = static_cast<long double>(x(i, j)) - (i == j ? 1.0L : 0.0L);
            acc += d * d;
        }
    }
    return static_cast<double>(acc);
}

}  // namespace onmf
