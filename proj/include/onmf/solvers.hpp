#ifndef ONMF_SOLVERS_HPP_
#define ONMF_SOLVERS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "onmf/model.hpp"

namespace onmf {

enum class Algorithm {
    ding_bnmtf,        // original multiplicative tri-factorization scheme
    mur_bnmtf,         // multiplicative scheme for the penalized objective
    aur_bnmtf,         // additive scheme with zero-escape safeguards
    convergent_bnmtf,  // additive scheme wrapped in per-factor monotone loops
    ls_nmf,            // classical two-factor multiplicative baseline
    mur_uortho,        // uni-orthogonal special case (S = I, beta = 0), multiplicative
    convergent_uortho  // uni-orthogonal special case, convergent additive
};

const char* to_string(Algorithm algorithm);
std::optional<Algorithm> algorithm_from_string(const std::string& name);
bool is_multiplicative(Algorithm algorithm);

enum class InitKind { uniform_random, provided };

struct SolverConfig {
    Algorithm algorithm = Algorithm::convergent_bnmtf;
    double delta = 1e-8;   // denominator guard / base delta of the inner loop
    double sigma = 1e-8;   // zero-escape floor for the safeguarded factors
    double step = 10.0;    // growth factor applied to delta after each trial
    std::size_t max_outer_iters = 20;
    std::size_t max_inner_iters = 60;
    std::uint64_t seed = 0;
    InitKind init = InitKind::uniform_random;

    void validate() const;
};

/// Per-run record: objective after each outer iteration (index 0 is the
/// initial point), delta-escalation counts per factor, KKT residuals and
/// per-iteration wall time. All arrays share the same length.
struct IterationTrace {
    std::vector<double> objective;
    std::vector<std::array<std::size_t, 3>> inner_counts;  // {B, C, S}
    std::vector<double> kkt_overall;
    std::vector<double> wall_ms;
    std::optional<std::size_t> converged_at;
    std::size_t clamp_events = 0;  // additive updates clipped at zero
};

/// Raised when a repeat-until loop fails to accept within max_inner_iters
/// escalations; carries the trace accumulated so far.
struct InnerLoopError : NumericError {
    IterationTrace trace;
    InnerLoopError(const std::string& msg, IterationTrace partial)
        : NumericError(msg), trace(std::move(partial)) {}
};

struct SafeguardedFactors {
    DenseMatrix b_bar;
    DenseMatrix c_bar;
    DenseMatrix s_bar;
};

// Entrywise: keeps the factor entry where the gradient is >= 0, otherwise
// lifts it to at least sigma so a zero entry can move.
DenseMatrix safeguard_factor(const DenseMatrix& factor, const DenseMatrix& grad, double sigma);
SafeguardedFactors safeguard(const FactorModel& model, const Gradients& grads, double sigma);

// Uniform random factors, deterministic per seed: entries in (0,1] for
// multiplicative algorithms (zero entries would lock), [0,1) for additive
// ones. Fill order is B, S, C, row-major.
FactorModel init_factors(std::size_t m, std::size_t n, std::size_t p, std::size_t q,
                         const SolverConfig& cfg);

// One sweep of the original tri-factorization scheme: B from the old
// factors, then C using the new B, then S using the new B and C.
FactorModel ding_step(const DataMatrix& a, const FactorModel& model, const SolverConfig& cfg);

// One sweep of the penalized multiplicative scheme, same staging.
FactorModel mur_step(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp,
                     const SolverConfig& cfg);

struct AurStepResult {
    FactorModel model;
    std::array<std::size_t, 3> clamped;  // negative outputs clipped, per factor
};

// One additive sweep with fixed per-factor deltas. Each factor's gradient
// and safeguard are evaluated at the staged point: B at (B,S,C), C at
// (B+,S,C), S at (B+,S,C+).
AurStepResult aur_step(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp,
                       const SolverConfig& cfg, double delta_b, double delta_c, double delta_s);

// One alternating sweep of the classical two-factor multiplicative baseline.
std::pair<DenseMatrix, DenseMatrix> ls_nmf_step(const DataMatrix& a, const DenseMatrix& b,
                                                const DenseMatrix& c, const SolverConfig& cfg);

/// Observer hooks for tests and diagnostics. on_block fires once per
/// accepted factor update in the convergent driver; on_sweep fires after
/// every completed outer iteration of any solver.
struct BlockStepInfo {
    std::size_t outer_iter;
    char factor;  // 'B', 'C' or 'S'
    double objective_before;
    double objective_after;
    std::size_t escalations;
};
struct SolveHooks {
    std::function<void(const BlockStepInfo&)> on_block;
    std::function<void(std::size_t, const FactorModel&)> on_sweep;
};

struct SolveResult {
    FactorModel model;
    IterationTrace trace;
};

// Fixed-sweep drivers; the trace records violations instead of failing when
// the objective increases.
SolveResult ding_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                       const FactorModel* initial = nullptr, const SolveHooks* hooks = nullptr);
SolveResult mur_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                      const FactorModel* initial = nullptr, const SolveHooks* hooks = nullptr);
SolveResult aur_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                      const FactorModel* initial = nullptr, const SolveHooks* hooks = nullptr);

// The provably convergent driver: per factor, reset delta, apply the
// additive update, grow delta by step, and repeat until the factor's staged
// objective is nonincreasing. Stops early once successive objectives agree
// to 1e-12 * J0 and the KKT residual falls below 1e-8.
SolveResult convergent_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                             const FactorModel* initial = nullptr,
                             const SolveHooks* hooks = nullptr);

struct TwoFactorResult {
    DenseMatrix b;
    DenseMatrix c;
    IterationTrace trace;
};

TwoFactorResult ls_nmf_solve(const DataMatrix& a, std::size_t rank, const SolverConfig& cfg,
                             const DenseMatrix* b0 = nullptr, const DenseMatrix* c0 = nullptr);

// Uni-orthogonal case: S frozen at identity, beta = 0. cfg.algorithm picks
// the multiplicative or convergent variant.
TwoFactorResult uortho_solve(const DataMatrix& a, double alpha, std::size_t rank,
                             const SolverConfig& cfg, const DenseMatrix* b0 = nullptr,
                             const DenseMatrix* c0 = nullptr);

// Dispatches on cfg.algorithm; two-factor algorithms come back with S = I.
SolveResult solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                  const FactorModel* initial = nullptr, const SolveHooks* hooks = nullptr);

// Number of k with objective[k+1] > objective[k] + rel_slack * objective[0].
std::size_t count_monotonicity_violations(const std::vector<double>& objective,
                                          double rel_slack = 1e-9);

}  // namespace onmf

#endif  // ONMF_SOLVERS_HPP_
