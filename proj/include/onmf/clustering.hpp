#ifndef ONMF_CLUSTERING_HPP_
#define ONMF_CLUSTERING_HPP_

#include <cstddef>
#include <vector>

#include "onmf/matrix.hpp"

namespace onmf {

/// Cluster labels, one per item; every label lies in [0, num_clusters).
struct Assignment {
    std::vector<std::size_t> labels;
    std::size_t num_clusters = 0;

    void validate() const;
};

enum class AssignAxis { columns, rows };

// argmax over the factor dimension, ties to the lowest index: column n of C
// maps to argmax_q C(q,n); row m of B maps to argmax_p B(m,p).
Assignment assign_from_factor(const DenseMatrix& factor, AssignAxis axis);

struct WordReferenceClasses {
    Assignment classes;
    std::size_t zero_rows = 0;  // words with no occurrences, assigned class 0
};

// Reference classes for word clustering: each word goes to the document
// class where its aggregate frequency is highest, ties to the lowest class.
WordReferenceClasses word_reference_classes(const DataMatrix& a, const Assignment& doc_labels);

/// External clustering quality metrics. Mutual information is unnormalized,
/// in bits; entropy uses log base #classes so it lies in [0, 1].
struct MetricReport {
    double mutual_information = 0.0;
    double entropy = 0.0;
    double purity = 0.0;
    double fmeasure = 0.0;
};

MetricReport evaluate(const Assignment& pred, const Assignment& truth);

}  // namespace onmf

#endif  // ONMF_CLUSTERING_HPP_
