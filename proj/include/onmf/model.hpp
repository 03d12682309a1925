#ifndef ONMF_MODEL_HPP_
#define ONMF_MODEL_HPP_

#include "onmf/matrix.hpp"

namespace onmf {

/// Orthogonality weights and rank parameters. alpha weighs ||C C^T - I||^2,
/// beta weighs ||B^T B - I||^2. p and q are the factor ranks (equal by
/// default; unequal ranks are legal but unusual).
struct Hyperparams {
    double alpha = 0.1;
    double beta = 1.0;
    std::size_t p = 2;
    std::size_t q = 2;

    void validate() const;
};

/// The factor triple A ~ B S C with B (m x p), S (p x q), C (q x n).
struct FactorModel {
    DenseMatrix B;
    DenseMatrix S;
    DenseMatrix C;

    void validate_shapes(std::size_t m, std::size_t n) const;
    bool feasible() const { return B.all_nonneg() && S.all_nonneg() && C.all_nonneg(); }
};

struct Gradients {
    DenseMatrix wrt_b;
    DenseMatrix wrt_s;
    DenseMatrix wrt_c;
};

struct LambdaEstimates {
    DenseMatrix lambda_b;  // p x p
    DenseMatrix lambda_c;  // q x q
};

/// First-order stationarity violations. comp_slack_* is the largest
/// |grad ⊙ factor| entry; min_grad_* is the most negative gradient entry
/// over (numerically) zero factor entries, 0 when no such entry exists.
/// overall is the largest violation magnitude across all six checks and
/// vanishes exactly at a KKT point.
struct KktResidual {
    double min_grad_b = 0.0;
    double min_grad_s = 0.0;
    double min_grad_c = 0.0;
    double comp_slack_b = 0.0;
    double comp_slack_s = 0.0;
    double comp_slack_c = 0.0;
    double overall = 0.0;
};

// (1/2) ||A - B C||_F^2
double objective_plain(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& c);

// (1/2) ||A - BSC||_F^2 + (alpha/2) ||C C^T - I||_F^2 + (beta/2) ||B^T B - I||_F^2
double objective_bnmtf(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp);

// Single-factor gradients of the penalized objective, usable at staged
// points (the additive sweep evaluates each factor's gradient with a
// different mixture of old and new factors).
DenseMatrix grad_wrt_b(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                       const DenseMatrix& c, double beta);
DenseMatrix grad_wrt_c(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                       const DenseMatrix& c, double alpha);
DenseMatrix grad_wrt_s(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                       const DenseMatrix& c);

Gradients grad_bnmtf(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp);

// Multiplier estimates for the constrained tri-factorization:
//   Lambda_B = B^T A C^T S^T - S C C^T S^T
//   Lambda_C = S^T B^T A C^T - S^T B^T B S
// Exact on the diagonal only; off-diagonal entries are the documented
// approximation and may be negative.
LambdaEstimates lambda_estimates(const DataMatrix& a, const FactorModel& model);

// Entries below 1e-12 * max(max entry, 1) are classified as zero for the
// nonnegative-gradient check.
double zero_threshold(const DenseMatrix& x);

// min_grad / comp_slack pair for a single factor/gradient pair.
void factor_kkt(const DenseMatrix& factor, const DenseMatrix& grad, double& min_grad,
                double& comp_slack);

KktResidual kkt_residual(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp);

}  // namespace onmf

#endif  // ONMF_MODEL_HPP_
