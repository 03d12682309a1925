#include "onmf/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace onmf {

void Hyperparams::validate() const {
    if (alpha < 0.0 || beta < 0.0) throw ShapeError("Hyperparams: alpha and beta must be >= 0");
    if (p < 1 || q < 1) throw ShapeError("Hyperparams: ranks p and q must be >= 1");
}

void FactorModel::validate_shapes(std::size_t m, std::size_t n) const {
    if (B.rows() != m || B.cols() != S.rows() || S.cols() != C.rows() || C.cols() != n) {
        throw ShapeError("FactorModel: factor chain " + std::to_string(B.rows()) + "x" +
                         std::to_string(B.cols()) + " * " + std::to_string(S.rows()) + "x" +
                         std::to_string(S.cols()) + " * " + std::to_string(C.rows()) + "x" +
                         std::to_string(C.cols()) + " does not match data " + std::to_string(m) +
                         "x" + std::to_string(n));
    }
}

double objective_plain(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& c) {
    if (b.rows() != a.rows() || c.cols() != a.cols() || b.cols() != c.rows()) {
        throw ShapeError("objective_plain: B " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ", C " + std::to_string(c.rows()) + "x" +
                         std::to_string(c.cols()) + " does not match data " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    return 0.5 * frobenius_sq_diff(a, matmul(b, c));
}

double objective_bnmtf(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp) {
    model.validate_shapes(a.rows(), a.cols());
    const DenseMatrix bsc = matmul(matmul(model.B, model.S), model.C);
    double j = 0.5 * frobenius_sq_diff(a, bsc);
    if (hp.alpha != 0.0) {
        j += 0.5 * hp.alpha * frobenius_sq_diff_identity(matmul(model.C, model.C, false, true));
    }
    if (hp.beta != 0.0) {
        j += 0.5 * hp.beta * frobenius_sq_diff_identity(matmul(model.B, model.B, true, false));
    }
    return j;
}

DenseMatrix grad_wrt_b(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                       const DenseMatrix& c, double beta) {
    // B S C C^T S^T - A C^T S^T + 2 beta (B B^T B - B). The penalty part is
    // the exact gradient of (beta/2) ||B^T B - I||^2; it vanishes wherever
    // B^T B = I, so stationary points of the orthonormal case are unaffected
    // by the scaling.
    const DenseMatrix cct = matmul(c, c, false, true);
    const DenseMatrix scctst = matmul(matmul(s, cct), s, false, true);
    DenseMatrix g = subtract(matmul(b, scctst), matmul(matmul(a, c, false, true), s, false, true));
    if (beta != 0.0) {
        const DenseMatrix btb = matmul(b, b, true, false);
        g = add_scaled(g, subtract(matmul(b, btb), b), 2.0 * beta);
    }
    return g;
}

DenseMatrix grad_wrt_c(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                       const DenseMatrix& c, double alpha) {
    // S^T B^T B S C - S^T B^T A + 2 alpha (C C^T C - C), the exact gradient
    // of (alpha/2) ||C C^T - I||^2 on the penalty part.
    const DenseMatrix btb = matmul(b, b, true, false);
    const DenseMatrix stbtbs = matmul(matmul(s, btb, true, false), s);
    // S^T B^T A == (A^T B S)^T; products keep the sparse matrix on the left.
    const DenseMatrix stbta = matmul(matmul(a, b, true, false), s).transposed();
    DenseMatrix g = subtract(matmul(stbtbs, c), stbta);
    if (alpha != 0.0) {
        const DenseMatrix cct = matmul(c, c, false, true);
        g = add_scaled(g, subtract(matmul(cct, c), c), 2.0 * alpha);
    }
    return g;
}

DenseMatrix grad_wrt_s(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                       const DenseMatrix& c) {
    // B^T B S C C^T - B^T A C^T
    const DenseMatrix btb = matmul(b, b, true, false);
    const DenseMatrix cct = matmul(c, c, false, true);
    const DenseMatrix btact = matmul(b, matmul(a, c, false, true), true, false);
    return subtract(matmul(matmul(btb, s), cct), btact);
}

Gradients grad_bnmtf(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp) {
    model.validate_shapes(a.rows(), a.cols());
    return Gradients{grad_wrt_b(a, model.B, model.S, model.C, hp.beta),
                     grad_wrt_s(a, model.B, model.S, model.C),
                     grad_wrt_c(a, model.B, model.S, model.C, hp.alpha)};
}

LambdaEstimates lambda_estimates(const DataMatrix& a, const FactorModel& model) {
    model.validate_shapes(a.rows(), a.cols());
    const DenseMatrix act = matmul(a, model.C, false, true);          // m x q
    const DenseMatrix btact = matmul(model.B, act, true, false);      // p x q
    const DenseMatrix cct = matmul(model.C, model.C, false, true);    // q x q
    const DenseMatrix btb = matmul(model.B, model.B, true, false);    // p x p
    const DenseMatrix lambda_b = subtract(matmul(btact, model.S, false, true),
                                          matmul(matmul(model.S, cct), model.S, false, true));
    const DenseMatrix lambda_c = subtract(matmul(model.S, btact, true, false),
                                          matmul(matmul(model.S, btb, true, false), model.S));
    return LambdaEstimates{lambda_b, lambda_c};
}

double zero_threshold(const DenseMatrix& x) {
    return 1e-12 * std::max(x.max_entry(), 1.0);
}

void factor_kkt(const DenseMatrix& factor, const DenseMatrix& grad, double& min_grad,
                double& comp_slack) {
    const double tol = zero_threshold(factor);
    min_grad = 0.0;
    comp_slack = 0.0;
    for (std::size_t k = 0; k < factor.size(); ++k) {
        const double x = factor.values()[k];
        const double g = grad.values()[k];
        if (x < tol) min_grad = std::min(min_grad, g);
        comp_slack = std::max(comp_slack, std::abs(g * x));
    }
}

KktResidual kkt_residual(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp) {
    if (!model.feasible()) {
        throw ShapeError("kkt_residual: model has negative entries (infeasible point)");
    }
    const Gradients g = grad_bnmtf(a, model, hp);
    KktResidual r;
    factor_kkt(model.B, g.wrt_b, r.min_grad_b, r.comp_slack_b);
    factor_kkt(model.S, g.wrt_s, r.min_grad_s, r.comp_slack_s);
    factor_kkt(model.C, g.wrt_c, r.min_grad_c, r.comp_slack_c);
    r.overall = std::max({-r.min_grad_b, -r.min_grad_s, -r.min_grad_c, r.comp_slack_b,
                          r.comp_slack_s, r.comp_slack_c, 0.0});
    return r;
}

}  // namespace onmf
