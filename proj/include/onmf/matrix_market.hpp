#ifndef ONMF_MATRIX_MARKET_HPP_
#define ONMF_MATRIX_MARKET_HPP_

#include <filesystem>
#include <string>

#include "onmf/matrix.hpp"

namespace onmf {

// Accepts coordinate or array format, real or integer field, general
// symmetry. The result is always CSR; negative entries are rejected because
// the factorization input must be nonnegative.
DataMatrix read_matrix_market(const std::filesystem::path& path);

// Coordinate format, 1-based indices, shortest round-trip decimals so a
// write/read cycle reproduces the doubles bit for bit.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrixCSR& matrix);

// Array format (column-major), same number formatting.
void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& matrix);

void write_matrix_market(const std::filesystem::path& path, const DataMatrix& matrix);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace onmf

#endif  // ONMF_MATRIX_MARKET_HPP_
