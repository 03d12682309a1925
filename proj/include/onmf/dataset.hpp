#ifndef ONMF_DATASET_HPP_
#define ONMF_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "onmf/clustering.hpp"
#include "onmf/model.hpp"

namespace onmf {

struct Dataset {
    DataMatrix matrix;
    std::optional<Assignment> doc_labels;   // ground-truth classes per column
    std::optional<Assignment> word_labels;  // ground-truth classes per row
    std::string name;
};

/// Synthetic planted co-cluster dataset plus the planted factor triple.
/// The planted B and C have orthogonal block supports and unit-norm
/// columns/rows (scale carried by S), so the planted point is exactly
/// bi-orthonormal and, at noise 0, fits the matrix exactly.
struct SyntheticData {
    Dataset dataset;
    FactorModel planted;
};

// rows/cols are partitioned into p/q contiguous blocks; sparsity is the
// target fraction of nonzeros (achieved by dropping word rows from the
// signal support; infeasible when it exceeds the block-support density).
// Gaussian noise of the given scale perturbs the signal entries and the
// result is clipped at zero. Deterministic per seed.
SyntheticData gen_planted(std::size_t rows, std::size_t cols, std::size_t p, std::size_t q,
                          double noise, double sparsity, std::uint64_t seed);

Dataset gen_synthetic(std::size_t rows, std::size_t cols, std::size_t p, std::size_t q,
                      double noise, double sparsity, std::uint64_t seed);

// "item_id,label" with a header row.
void write_labels_csv(const std::filesystem::path& path, const Assignment& labels);
Assignment read_labels_csv(const std::filesystem::path& path);

// Dataset directory layout: matrix.mtx plus doc_labels.csv / word_labels.csv
// when the labels are present.
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace onmf

#endif  // ONMF_DATASET_HPP_
