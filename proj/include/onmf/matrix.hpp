#ifndef ONMF_MATRIX_HPP_
#define ONMF_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "onmf/errors.hpp"

namespace onmf {

/// Dense row-major matrix of doubles. Factors and all intermediate
/// products live here; kernels never alias an output with an input.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix constant(std::size_t rows, std::size_t cols, double value);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    DenseMatrix transposed() const;

    double max_entry() const;
    double min_entry() const;
    double max_abs() const;
    bool all_finite() const;
    bool all_nonneg() const;

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Compressed sparse row matrix with nonnegative stored values; holds the
/// data matrix A. Construction validates the CSR structure invariants
/// (row_ptr monotone, columns strictly increasing within a row, values >= 0).
class SparseMatrixCSR {
  public:
    SparseMatrixCSR() = default;
    SparseMatrixCSR(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                    std::vector<std::size_t> col_idx, std::vector<double> values);

    struct Triplet {
        std::size_t row;
        std::size_t col;
        double value;
    };
    // Triplets may arrive unordered; duplicates are an error.
    static SparseMatrixCSR from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets);
    // Zero entries are dropped; negative entries are an error.
    static SparseMatrixCSR from_dense(const DenseMatrix& dense);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::size_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    DenseMatrix to_dense() const;
    double max_entry() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

/// The input matrix A: either CSR (document-term style data) or dense.
class DataMatrix {
  public:
    DataMatrix() : storage_(DenseMatrix()) {}
    DataMatrix(SparseMatrixCSR m) : storage_(std::move(m)) {}
    DataMatrix(DenseMatrix m) : storage_(std::move(m)) {}

    bool is_sparse() const { return std::holds_alternative<SparseMatrixCSR>(storage_); }
    const SparseMatrixCSR& sparse() const { return std::get<SparseMatrixCSR>(storage_); }
    const DenseMatrix& dense() const { return std::get<DenseMatrix>(storage_); }

    std::size_t rows() const;
    std::size_t cols() const;
    std::size_t nnz() const;
    DenseMatrix to_dense() const;
    double max_entry() const;

    // Visits stored entries only for sparse storage, all entries for dense.
    void for_each_entry(const std::function<void(std::size_t, std::size_t, double)>& fn) const;

  private:
    std::variant<DenseMatrix, SparseMatrixCSR> storage_;
};

// ---- kernels -------------------------------------------------------------
//
// All kernels are pure: inputs are never modified, outputs are fresh
// buffers. Accumulation happens in long double where the gather order
// allows; the scatter path (transposed sparse product) accumulates in
// double. Row partitioning keeps parallel products bit-identical to the
// serial ones; ORTHO_NMF_THREADS caps the thread count (default 1).

DenseMatrix matmul(const DenseMatrix& lhs, const DenseMatrix& rhs, bool transpose_lhs = false,
                   bool transpose_rhs = false);
DenseMatrix matmul(const SparseMatrixCSR& lhs, const DenseMatrix& rhs, bool transpose_lhs = false,
                   bool transpose_rhs = false);
DenseMatrix matmul(const DataMatrix& lhs, const DenseMatrix& rhs, bool transpose_lhs = false,
                   bool transpose_rhs = false);

double frobenius_sq_diff(const DenseMatrix& x, const DenseMatrix& y);
double frobenius_sq_diff(const SparseMatrixCSR& x, const DenseMatrix& y);
double frobenius_sq_diff(const DataMatrix& x, const DenseMatrix& y);

DenseMatrix hadamard(const DenseMatrix& x, const DenseMatrix& y);

DenseMatrix add(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix subtract(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix scaled(const DenseMatrix& x, double factor);
// x + factor * y
DenseMatrix add_scaled(const DenseMatrix& x, const DenseMatrix& y, double factor);

// ||x - I||_F^2 for square x.
double frobenius_sq_diff_identity(const DenseMatrix& x);

int kernel_threads();

}  // namespace onmf

#endif  // ONMF_MATRIX_HPP_
