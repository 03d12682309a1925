#include "onmf/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace onmf {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::size_t parse_index(const std::string& tok, const std::filesystem::path& path,
                        std::size_t line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        fail(path, line, "expected a nonnegative integer, got '" + tok + "'");
    }
    if (v > std::numeric_limits<std::size_t>::max() / 2) {
        fail(path, line, "dimension overflow: " + tok);
    }
    return static_cast<std::size_t>(v);
}

double parse_value(const std::string& tok, const std::filesystem::path& path, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
        fail(path, line, "expected a real number, got '" + tok + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

DataMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open file");

    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) fail(path, lineno, "missing MatrixMarket banner");
    auto banner = split_ws(line);
    if (banner.size() < 5 || lower(banner[0]) != "%%matrixmarket" || lower(banner[1]) != "matrix") {
        fail(path, lineno, "not a MatrixMarket matrix file");
    }
    const std::string layout = lower(banner[2]);
    const std::string field = lower(banner[3]);
    const std::string symmetry = lower(banner[4]);
    if (layout != "coordinate" && layout != "array") {
        fail(path, lineno, "unsupported layout '" + banner[2] + "' (coordinate or array)");
    }
    if (field != "real" && field != "integer") {
        fail(path, lineno, "unsupported field '" + banner[3] + "' (real or integer)");
    }
    if (symmetry != "general") {
        fail(path, lineno, "unsupported symmetry '" + banner[4] + "' (general only)");
    }

    // skip comments and blank lines up to the size line
    std::vector<std::string> size_tokens;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        size_tokens = split_ws(line);
        if (!size_tokens.empty()) break;
    }
    const std::size_t expected_size_tokens = layout == "coordinate" ? 3 : 2;
    if (size_tokens.size() != expected_size_tokens) {
        fail(path, lineno, "malformed size line");
    }
    const std::size_t rows = parse_index(size_tokens[0], path, lineno);
    const std::size_t cols = parse_index(size_tokens[1], path, lineno);
    if (rows == 0 || cols == 0) fail(path, lineno, "matrix dimensions must be positive");
    if (cols != 0 && rows > std::numeric_limits<std::size_t>::max() / cols) {
        fail(path, lineno, "dimension overflow: " + std::to_string(rows) + "x" +
                               std::to_string(cols));
    }

    std::vector<SparseMatrixCSR::Triplet> triplets;
    if (layout == "coordinate") {
        const std::size_t nnz = parse_index(size_tokens[2], path, lineno);
        triplets.reserve(nnz);
        std::size_t seen = 0;
        while (seen < nnz) {
            if (!std::getline(in, line)) fail(path, lineno + 1, "unexpected end of file");
            ++lineno;
            if (!line.empty() && line[0] == '%') continue;
            auto tokens = split_ws(line);
            if (tokens.empty()) continue;
            if (tokens.size() != 3) fail(path, lineno, "expected 'row col value'");
            const std::size_t i = parse_index(tokens[0], path, lineno);
            const std::size_t j = parse_index(tokens[1], path, lineno);
            const double v = parse_value(tokens[2], path, lineno);
            if (i < 1 || i > rows || j < 1 || j > cols) {
                fail(path, lineno, "entry (" + tokens[0] + "," + tokens[1] + ") outside " +
                                       std::to_string(rows) + "x" + std::to_string(cols));
            }
            if (v < 0.0) {
                fail(path, lineno, "negative value " + tokens[2] + " (matrix must be nonnegative)");
            }
            triplets.push_back({i - 1, j - 1, v});
            ++seen;
        }
    } else {
        // array format lists all entries column by column
        std::size_t count = 0;
        const std::size_t total = rows * cols;
        while (count < total) {
            if (!std::getline(in, line)) fail(path, lineno + 1, "unexpected end of file");
            ++lineno;
            if (!line.empty() && line[0] == '%') continue;
            for (const auto& tok : split_ws(line)) {
                if (count >= total) fail(path, lineno, "more entries than rows*cols");
                const double v = parse_value(tok, path, lineno);
                if (v < 0.0) {
                    fail(path, lineno, "negative value " + tok + " (matrix must be nonnegative)");
                }
                const std::size_t i = count % rows;
                const std::size_t j = count / rows;
                if (v != 0.0) triplets.push_back({i, j, v});
                ++count;
            }
        }
    }

    try {
        return DataMatrix(SparseMatrixCSR::from_triplets(rows, cols, std::move(triplets)));
    } catch (const ShapeError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrixCSR& matrix) {
    std::ofstream out(path);
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << matrix.rows() << " " << matrix.cols() << " " << matrix.nnz() << "\n";
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        for (std::size_t p = matrix.row_ptr()[i]; p < matrix.row_ptr()[i + 1]; ++p) {
            out << (i + 1) << " " << (matrix.col_idx()[p] + 1) << " "
                << format_double(matrix.values()[p]) << "\n";
        }
    }
    if (!out) throw ParseError(path.string() + ": write failed");
}

void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& matrix) {
    std::ofstream out(path);
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    out << "%%MatrixMarket matrix array real general\n";
    out << matrix.rows() << " " << matrix.cols() << "\n";
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        for (std::size_t i = 0; i < matrix.rows(); ++i) {
            out << format_double(matrix(i, j)) << "\n";
        }
    }
    if (!out) throw ParseError(path.string() + ": write failed");
}

void write_matrix_market(const std::filesystem::path& path, const DataMatrix& matrix) {
    if (matrix.is_sparse()) {
        write_matrix_market(path, matrix.sparse());
    } else {
        write_matrix_market(path, matrix.dense());
    }
}

}  // namespace onmf
