#include "onmf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "onmf/matrix_market.hpp"

namespace onmf {

namespace {

class UniformRng {
  public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    double next_co() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Box-Muller; hand-rolled so the stream is implementation independent.
    double next_gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = next_co();
        while (u == 0.0) u = next_co();
        const double v = next_co();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double theta = 2.0 * 3.14159265358979323846 * v;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Contiguous partition of n items into k blocks, remainders on the first few.
std::vector<std::size_t> block_of(std::size_t n, std::size_t k) {
    std::vector<std::size_t> out(n);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t item = 0;
    for (std::size_t b = 0; b < k; ++b) {
        const std::size_t len = base + (b < extra ? 1 : 0);
        for (std::size_t i = 0; i < len; ++i) out[item++] = b;
    }
    return out;
}

}  // namespace

SyntheticData gen_planted(std::size_t rows, std::size_t cols, std::size_t p, std::size_t q,
                          double noise, double sparsity, std::uint64_t seed) {
    if (rows < 1 || cols < 1 || p < 1 || q < 1) {
        throw ShapeError("gen_planted: all shape parameters must be >= 1");
    }
    if (p > rows || q > cols) {
        throw ShapeError("gen_planted: more blocks than rows/cols");
    }
    if (noise < 0.0) throw ShapeError("gen_planted: noise must be >= 0");

    const std::vector<std::size_t> row_block = block_of(rows, p);
    const std::vector<std::size_t> col_block = block_of(cols, q);

    // Support density with every word kept: each column block q pairs with
    // row block q mod p.
    std::vector<std::size_t> rows_in(p, 0), cols_in(q, 0);
    for (std::size_t b : row_block) ++rows_in[b];
    for (std::size_t b : col_block) ++cols_in[b];
    double full_density = 0.0;
    for (std::size_t b = 0; b < q; ++b) {
        full_density += static_cast<double>(rows_in[b % p]) * cols_in[b] /
                        (static_cast<double>(rows) * cols);
    }
    if (!(sparsity > 0.0) || sparsity > full_density + 1e-12) {
        throw ShapeError("gen_planted: infeasible sparsity " + std::to_string(sparsity) +
                         " (block support allows at most " + std::to_string(full_density) + ")");
    }
    const double keep_word = std::min(1.0, sparsity / full_density);

    UniformRng rng(seed);

    // B: one entry per kept word row, in its block column.
    DenseMatrix b(rows, p);
    for (std::size_t m = 0; m < rows; ++m) {
        const bool keep = rng.next_co() < keep_word;
        const double value = 0.5 + rng.next_co();  // draw regardless, keeps the stream aligned
        if (keep) b(m, row_block[m]) = value;
    }
    // S: scale on the (q mod p, q) positions.
    DenseMatrix s(p, q);
    for (std::size_t j = 0; j < q; ++j) s(j % p, j) = 0.5 + rng.next_co();
    // C: one entry per document column, in its block row.
    DenseMatrix c(q, cols);
    for (std::size_t n = 0; n < cols; ++n) c(col_block[n], n) = 0.5 + rng.next_co();

    // Normalize B columns and C rows to unit length, folding the scale into
    // S so the product is unchanged and the planted point is orthonormal.
    for (std::size_t j = 0; j < p; ++j) {
        double norm_sq = 0.0;
        for (std::size_t m = 0; m < rows; ++m) norm_sq += b(m, j) * b(m, j);
        if (norm_sq == 0.0) continue;
        const double norm = std::sqrt(norm_sq);
        for (std::size_t m = 0; m < rows; ++m) b(m, j) /= norm;
        for (std::size_t k = 0; k < q; ++k) s(j, k) *= norm;
    }
    for (std::size_t i = 0; i < q; ++i) {
        double norm_sq = 0.0;
        for (std::size_t n = 0; n < cols; ++n) norm_sq += c(i, n) * c(i, n);
        if (norm_sq == 0.0) continue;
        const double norm = std::sqrt(norm_sq);
        for (std::size_t n = 0; n < cols; ++n) c(i, n) /= norm;
        for (std::size_t k = 0; k < p; ++k) s(k, i) *= norm;
    }

    // A = B S C, then noise on the signal support, clipped at zero so the
    // matrix stays nonnegative and exactly as sparse as the signal.
    const DenseMatrix signal = matmul(matmul(b, s), c);
    std::vector<SparseMatrixCSR::Triplet> triplets;
    for (std::size_t m = 0; m < rows; ++m) {
        for (std::size_t n = 0; n < cols; ++n) {
            double v = signal(m, n);
            if (v == 0.0) continue;
            if (noise > 0.0) v = std::max(0.0, v + noise * rng.next_gauss());
            if (v != 0.0) triplets.push_back({m, n, v});
        }
    }

    SyntheticData out;
    out.planted = FactorModel{std::move(b), std::move(s), std::move(c)};
    out.dataset.matrix =
        DataMatrix(SparseMatrixCSR::from_triplets(rows, cols, std::move(triplets)));
    out.dataset.doc_labels = Assignment{col_block, q};
    out.dataset.word_labels = Assignment{row_block, p};
    out.dataset.name = "planted_" + std::to_string(rows) + "x" + std::to_string(cols) + "_p" +
                       std::to_string(p) + "q" + std::to_string(q) + "_seed" +
                       std::to_string(seed);
    return out;
}

Dataset gen_synthetic(std::size_t rows, std::size_t cols, std::size_t p, std::size_t q,
                      double noise, double sparsity, std::uint64_t seed) {
    return gen_planted(rows, cols, p, q, noise, sparsity, seed).dataset;
}

void write_labels_csv(const std::filesystem::path& path, const Assignment& labels) {
    std::ofstream out(path);
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    out << "item_id,label\n";
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        out << i << "," << labels.labels[i] << "\n";
    }
    if (!out) throw ParseError(path.string() + ": write failed");
}

Assignment read_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) || line != "item_id,label") {
        throw ParseError(path.string() + ":1: expected header 'item_id,label'");
    }
    Assignment out;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 'id,label'");
        }
        std::size_t id = 0, label = 0;
        try {
            id = std::stoull(line.substr(0, comma));
            label = std::stoull(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed row '" +
                             line + "'");
        }
        if (id != out.labels.size()) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": item ids must be consecutive from 0");
        }
        out.labels.push_back(label);
        out.num_clusters = std::max(out.num_clusters, label + 1);
    }
    return out;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& dataset) {
    std::filesystem::create_directories(dir);
    write_matrix_market(dir / "matrix.mtx", dataset.matrix);
    if (dataset.doc_labels) write_labels_csv(dir / "doc_labels.csv", *dataset.doc_labels);
    if (dataset.word_labels) write_labels_csv(dir / "word_labels.csv", *dataset.word_labels);
}

Dataset read_dataset(const std::filesystem::path& dir) {
    Dataset out;
    out.matrix = read_matrix_market(dir / "matrix.mtx");
    out.name = dir.filename().string();
    if (std::filesystem::exists(dir / "doc_labels.csv")) {
        out.doc_labels = read_labels_csv(dir / "doc_labels.csv");
        if (out.doc_labels->labels.size() != out.matrix.cols()) {
            throw ParseError((dir / "doc_labels.csv").string() + ": " +
                             std::to_string(out.doc_labels->labels.size()) + " labels for " +
                             std::to_string(out.matrix.cols()) + " columns");
        }
    }
    if (std::filesystem::exists(dir / "word_labels.csv")) {
        out.word_labels = read_labels_csv(dir / "word_labels.csv");
        if (out.word_labels->labels.size() != out.matrix.rows()) {
            throw ParseError((dir / "word_labels.csv").string() + ": " +
                             std::to_string(out.word_labels->labels.size()) + " labels for " +
                             std::to_string(out.matrix.rows()) + " rows");
        }
    }
    return out;
}

}  // namespace onmf
