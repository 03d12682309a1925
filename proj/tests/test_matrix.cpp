#include <doctest.h>

#include <cmath>
#include <random>

#include "onmf/matrix.hpp"
#include "test_util.hpp"

using namespace onmf;
using test_util::random_dense;
using test_util::random_sparse;
using test_util::rel_err;

namespace {

// Independent triple-loop oracle, plain double accumulation.
DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    REQUIRE(a.cols() == b.rows());
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            for (std::size_t k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
    return out;
}

void check_close(const DenseMatrix& got, const DenseMatrix& want, double tol) {
    REQUIRE(got.rows() == want.rows());
    REQUIRE(got.cols() == want.cols());
    for (std::size_t k = 0; k < got.size(); ++k) {
        CAPTURE(k);
        CHECK(rel_err(got.values()[k], want.values()[k]) < tol);
    }
}

}  // namespace

TEST_CASE("matmul: identity passthrough") {
    std::mt19937_64 rng(1);
    const DenseMatrix x = random_dense(3, 5, rng);
    const DenseMatrix out = matmul(DenseMatrix::identity(3), x);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(out.values()[k] == x.values()[k]);
}

TEST_CASE("matmul: 1x1") {
    const DenseMatrix a(1, 1, {2.0});
    const DenseMatrix b(1, 1, {3.0});
    CHECK(matmul(a, b)(0, 0) == 6.0);
}

TEST_CASE("matmul: sparse times dense matches triple-loop oracle") {
    std::mt19937_64 rng(2);
    const SparseMatrixCSR a = random_sparse(4, 3, 0.6, rng);
    const DenseMatrix b = random_dense(3, 2, rng, -1.0, 1.0);
    check_close(matmul(a, b), naive_matmul(a.to_dense(), b), 1e-13);
    check_close(matmul(DataMatrix(a), b), naive_matmul(a.to_dense(), b), 1e-13);
}

TEST_CASE("matmul: transpose flags equal materialized transposes") {
    std::mt19937_64 rng(3);
    const DenseMatrix a = random_dense(5, 4, rng, -1.0, 1.0);
    const DenseMatrix b = random_dense(5, 4, rng, -1.0, 1.0);
    check_close(matmul(a, b, true, false), naive_matmul(a.transposed(), b), 1e-13);
    check_close(matmul(a, b, false, true), naive_matmul(a, b.transposed()), 1e-13);
    check_close(matmul(a, b.transposed(), true, true),
                naive_matmul(a.transposed(), b), 1e-13);

    const SparseMatrixCSR s = random_sparse(5, 4, 0.5, rng);
    check_close(matmul(s, b, true, false), naive_matmul(s.to_dense().transposed(), b), 1e-13);
    check_close(matmul(s, b, false, true), naive_matmul(s.to_dense(), b.transposed()), 1e-13);
    check_close(matmul(s, b.transposed(), true, true),
                naive_matmul(s.to_dense().transposed(), b), 1e-13);
}

TEST_CASE("matmul: nonnegative operands give nonnegative output") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        const DenseMatrix a = random_dense(4, 3, rng);
        const DenseMatrix b = random_dense(3, 5, rng);
        CHECK(matmul(a, b).all_nonneg());
    }
}

TEST_CASE("matmul: dimension mismatch names both shapes") {
    std::mt19937_64 rng(8);
    const DenseMatrix a(2, 3);
    const DenseMatrix b(2, 2);
    CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("2x3"), ShapeError);
    CHECK_NOTHROW(matmul(a, b, true, false));  // transposing the lhs makes the shapes agree
    CHECK_THROWS_AS(matmul(random_sparse(2, 3, 1.0, rng), b), ShapeError);
}

TEST_CASE("frobenius_sq_diff: examples and symmetry") {
    std::mt19937_64 rng(5);
    const DenseMatrix x = random_dense(3, 4, rng);
    CHECK(frobenius_sq_diff(x, x) == 0.0);

    const DenseMatrix eye = DenseMatrix::identity(2);
    const DenseMatrix zero(2, 2);
    CHECK(frobenius_sq_diff(eye, zero) == 2.0);

    const DenseMatrix a = random_dense(5, 5, rng);
    const DenseMatrix b = random_dense(5, 5, rng);
    double direct = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.values()[k] - b.values()[k];
        direct += d * d;
    }
    CHECK(rel_err(frobenius_sq_diff(a, b), direct) < 1e-13);
    CHECK(frobenius_sq_diff(a, b) == frobenius_sq_diff(b, a));

    const SparseMatrixCSR s = random_sparse(5, 5, 0.4, rng);
    CHECK(rel_err(frobenius_sq_diff(s, b), frobenius_sq_diff(s.to_dense(), b)) < 1e-13);
    CHECK(frobenius_sq_diff(s, s.to_dense()) == 0.0);

    CHECK_THROWS_AS(frobenius_sq_diff(a, x), ShapeError);
}

TEST_CASE("hadamard: examples and oracle") {
    std::mt19937_64 rng(6);
    const DenseMatrix x = random_dense(3, 3, rng, -2.0, 2.0);
    const DenseMatrix ones = DenseMatrix::constant(3, 3, 1.0);
    const DenseMatrix zeros(3, 3);

    const DenseMatrix with_ones = hadamard(x, ones);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(with_ones.values()[k] == x.values()[k]);
    CHECK(hadamard(x, zeros).max_abs() == 0.0);

    const DenseMatrix y = random_dense(3, 3, rng, -2.0, 2.0);
    const DenseMatrix got = hadamard(x, y);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(got(i, j) == x(i, j) * y(i, j));

    CHECK_THROWS_AS(hadamard(x, DenseMatrix(2, 3)), ShapeError);
}

TEST_CASE("CSR construction validates the structure invariants") {
    // valid 2x3 with entries (0,0)=1, (0,2)=2, (1,1)=3
    CHECK_NOTHROW(SparseMatrixCSR(2, 3, {0, 2, 3}, {0, 2, 1}, {1.0, 2.0, 3.0}));
    // row_ptr length wrong
    CHECK_THROWS_AS(SparseMatrixCSR(2, 3, {0, 2}, {0, 2}, {1.0, 2.0}), ShapeError);
    // column out of range
    CHECK_THROWS_AS(SparseMatrixCSR(2, 3, {0, 1, 1}, {3}, {1.0}), ShapeError);
    // columns not strictly increasing within a row
    CHECK_THROWS_AS(SparseMatrixCSR(1, 3, {0, 2}, {1, 1}, {1.0, 2.0}), ShapeError);
    // negative stored value
    CHECK_THROWS_AS(SparseMatrixCSR(1, 2, {0, 1}, {0}, {-1.0}), ShapeError);
    // duplicate triplet
    CHECK_THROWS_AS(SparseMatrixCSR::from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}), ShapeError);
}

TEST_CASE("CSR from_triplets sorts unordered input; dense round trip") {
    const SparseMatrixCSR m =
        SparseMatrixCSR::from_triplets(2, 3, {{1, 1, 3.0}, {0, 2, 2.0}, {0, 0, 1.0}});
    CHECK(m.nnz() == 3);
    CHECK(m.to_dense()(0, 0) == 1.0);
    CHECK(m.to_dense()(0, 2) == 2.0);
    CHECK(m.to_dense()(1, 1) == 3.0);

    const SparseMatrixCSR back = SparseMatrixCSR::from_dense(m.to_dense());
    CHECK(back.row_ptr() == m.row_ptr());
    CHECK(back.col_idx() == m.col_idx());
    CHECK(back.values() == m.values());
}

TEST_CASE("kernel outputs stay finite on finite inputs") {
    std::mt19937_64 rng(7);
    const DenseMatrix a = random_dense(6, 4, rng, 0.0, 1e6);
    const DenseMatrix b = random_dense(4, 6, rng, 0.0, 1e6);
    CHECK(matmul(a, b).all_finite());
    CHECK(hadamard(a, b.transposed()).all_finite());
}
