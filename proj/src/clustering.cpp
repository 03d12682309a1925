#include "onmf/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace onmf {

void Assignment::validate() const {
    for (std::size_t l : labels) {
        if (l >= num_clusters) {
            throw ShapeError("Assignment: label " + std::to_string(l) + " outside [0, " +
                             std::to_string(num_clusters) + ")");
        }
    }
}

Assignment assign_from_factor(const DenseMatrix& factor, AssignAxis axis) {
    if (factor.rows() == 0 || factor.cols() == 0) {
        throw ShapeError("assign_from_factor: empty factor matrix");
    }
    Assignment out;
    if (axis == AssignAxis::columns) {
        out.num_clusters = factor.rows();
        out.labels.resize(factor.cols());
        for (std::size_t n = 0; n < factor.cols(); ++n) {
            std::size_t best = 0;
            for (std::size_t q = 1; q < factor.rows(); ++q) {
                if (factor(q, n) > factor(best, n)) best = q;
            }
            out.labels[n] = best;
        }
    } else {
        out.num_clusters = factor.cols();
        out.labels.resize(factor.rows());
        for (std::size_t m = 0; m < factor.rows(); ++m) {
            std::size_t best = 0;
            for (std::size_t p = 1; p < factor.cols(); ++p) {
                if (factor(m, p) > factor(m, best)) best = p;
            }
            out.labels[m] = best;
        }
    }
    return out;
}

WordReferenceClasses word_reference_classes(const DataMatrix& a, const Assignment& doc_labels) {
    if (doc_labels.labels.size() != a.cols()) {
        throw ShapeError("word_reference_classes: " + std::to_string(doc_labels.labels.size()) +
                         " document labels for " + std::to_string(a.cols()) + " columns");
    }
    doc_labels.validate();
    const std::size_t classes = doc_labels.num_clusters;
    // freq[m * classes + c] = total weight of word m in documents of class c
    std::vector<double> freq(a.rows() * classes, 0.0);
    a.for_each_entry([&](std::size_t m, std::size_t n, double v) {
        freq[m * classes + doc_labels.labels[n]] += v;
    });

    WordReferenceClasses out;
    out.classes.num_clusters = classes;
    out.classes.labels.resize(a.rows());
    for (std::size_t m = 0; m < a.rows(); ++m) {
        std::size_t best = 0;
        double total = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            const double f = freq[m * classes + c];
            total += f;
            if (f > freq[m * classes + best]) best = c;
        }
        if (total == 0.0) {
            ++out.zero_rows;
            best = 0;
        }
        out.classes.labels[m] = best;
    }
    return out;
}

MetricReport evaluate(const Assignment& pred, const Assignment& truth) {
    if (pred.labels.size() != truth.labels.size()) {
        throw ShapeError("evaluate: " + std::to_string(pred.labels.size()) +
                         " predicted labels vs " + std::to_string(truth.labels.size()) +
                         " reference labels");
    }
    if (pred.labels.empty()) throw ShapeError("evaluate: empty assignments");
    pred.validate();
    truth.validate();

    const std::size_t n = pred.labels.size();
    const std::size_t nk = std::max<std::size_t>(pred.num_clusters, 1);
    const std::size_t nc = std::max<std::size_t>(truth.num_clusters, 1);
    std::vector<double> joint(nk * nc, 0.0);
    std::vector<double> cluster_size(nk, 0.0);
    std::vector<double> class_size(nc, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        joint[pred.labels[i] * nc + truth.labels[i]] += 1.0;
        cluster_size[pred.labels[i]] += 1.0;
        class_size[truth.labels[i]] += 1.0;
    }
    const double total = static_cast<double>(n);
    std::size_t classes_present = 0;
    for (double s : class_size) {
        if (s > 0.0) ++classes_present;
    }

    MetricReport report;

    // MI in bits; empty cells contribute nothing.
    for (std::size_t k = 0; k < nk; ++k) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double nkc = joint[k * nc + c];
            if (nkc == 0.0) continue;
            const double pkc = nkc / total;
            report.mutual_information +=
                pkc * std::log2(pkc * total * total / (cluster_size[k] * class_size[c]));
        }
    }

    // Entropy normalized by log(#classes present); degenerate single-class
    // references score 0.
    if (classes_present > 1) {
        const double log_base = std::log(static_cast<double>(classes_present));
        for (std::size_t k = 0; k < nk; ++k) {
            if (cluster_size[k] == 0.0) continue;
            double h = 0.0;
            for (std::size_t c = 0; c < nc; ++c) {
                const double nkc = joint[k * nc + c];
                if (nkc == 0.0) continue;
                const double p = nkc / cluster_size[k];
                h -= p * std::log(p);
            }
            report.entropy += (cluster_size[k] / total) * (h / log_base);
        }
    }

    for (std::size_t k = 0; k < nk; ++k) {
        double best = 0.0;
        for (std::size_t c = 0; c < nc; ++c) best = std::max(best, joint[k * nc + c]);
        report.purity += best / total;
    }

    // F = sum_c (n_c/n) max_k 2 P R / (P + R)
    for (std::size_t c = 0; c < nc; ++c) {
        if (class_size[c] == 0.0) continue;
        double best = 0.0;
        for (std::size_t k = 0; k < nk; ++k) {
            const double nkc = joint[k * nc + c];
            if (nkc == 0.0 || cluster_size[k] == 0.0) continue;
            const double precision = nkc / cluster_size[k];
            const double recall = nkc / class_size[c];
            best = std::max(best, 2.0 * precision * recall / (precision + recall));
        }
        report.fmeasure += (class_size[c] / total) * best;
    }

    return report;
}

}  // namespace onmf
