#include "onmf/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <utility>

namespace onmf {

namespace {

constexpr double kKktTol = 1e-8;
constexpr double kObjDiffRel = 1e-12;

// mt19937_64 output mapped to doubles by hand so the stream does not depend
// on the standard library's distribution implementation.
class UniformRng {
  public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    // [0, 1)
    double next_co() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    // (0, 1]
    double next_oc() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

void fill_uniform(DenseMatrix& m, UniformRng& rng, bool strictly_positive) {
    for (double& v : m.values()) v = strictly_positive ? rng.next_oc() : rng.next_co();
}

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// x_new = x .* num ./ (den + delta). Zero entries stay zero without touching
// the ratio (multiplicative updates cannot move them anyway, and 0/0 must
// not poison the sweep).
DenseMatrix multiplicative_update(const DenseMatrix& x, const DenseMatrix& num,
                                  const DenseMatrix& den, double delta, const char* where) {
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double xv = x.values()[k];
        if (xv == 0.0) continue;
        const double v = xv * num.values()[k] / (den.values()[k] + delta);
        if (!std::isfinite(v)) {
            throw NumericError(std::string(where) + ": non-finite update at (" +
                               std::to_string(k / x.cols()) + "," + std::to_string(k % x.cols()) +
                               ")");
        }
        out.values()[k] = v;
    }
    return out;
}

// Gradient, safeguarded factor and denominator base (without delta) for one
// additive factor update, all evaluated at the staged point the caller
// chose. Retrying with a larger delta reuses the same payload.
struct AdditiveBlock {
    DenseMatrix grad;
    DenseMatrix bar;
    DenseMatrix denom_base;
};

AdditiveBlock prepare_block_b(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                              const DenseMatrix& c, double beta, double sigma) {
    AdditiveBlock blk;
    blk.grad = grad_wrt_b(a, b, s, c, beta);
    blk.bar = safeguard_factor(b, blk.grad, sigma);
    const DenseMatrix cct = matmul(c, c, false, true);
    const DenseMatrix scctst = matmul(matmul(s, cct), s, false, true);
    blk.denom_base = matmul(blk.bar, scctst);
    if (beta != 0.0) {
        blk.denom_base =
            add_scaled(blk.denom_base, matmul(blk.bar, matmul(blk.bar, blk.bar, true, false)), beta);
    }
    return blk;
}

AdditiveBlock prepare_block_c(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                              const DenseMatrix& c, double alpha, double sigma) {
    AdditiveBlock blk;
    blk.grad = grad_wrt_c(a, b, s, c, alpha);
    blk.bar = safeguard_factor(c, blk.grad, sigma);
    const DenseMatrix btb = matmul(b, b, true, false);
    const DenseMatrix stbtbs = matmul(matmul(s, btb, true, false), s);
    blk.denom_base = matmul(stbtbs, blk.bar);
    if (alpha != 0.0) {
        blk.denom_base =
            add_scaled(blk.denom_base, matmul(matmul(blk.bar, blk.bar, false, true), blk.bar), alpha);
    }
    return blk;
}

AdditiveBlock prepare_block_s(const DataMatrix& a, const DenseMatrix& b, const DenseMatrix& s,
                              const DenseMatrix& c, double sigma) {
    AdditiveBlock blk;
    blk.grad = grad_wrt_s(a, b, s, c);
    blk.bar = safeguard_factor(s, blk.grad, sigma);
    blk.denom_base =
        matmul(matmul(matmul(b, b, true, false), blk.bar), matmul(c, c, false, true));
    return blk;
}

// x_new = x - bar .* grad ./ (denom_base + delta), clipped at zero.
DenseMatrix apply_additive(const DenseMatrix& x, const AdditiveBlock& blk, double delta,
                           std::size_t& clamps, const char* where) {
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < x.size(); ++k) {
        double v = x.values()[k] -
                   blk.bar.values()[k] * blk.grad.values()[k] / (blk.denom_base.values()[k] + delta);
        if (!std::isfinite(v)) {
            throw NumericError(std::string(where) + ": non-finite update at (" +
                               std::to_string(k / x.cols()) + "," + std::to_string(k % x.cols()) +
                               ")");
        }
        if (v < 0.0) {
            v = 0.0;
            ++clamps;
        }
        out.values()[k] = v;
    }
    return out;
}

struct BlockOutcome {
    DenseMatrix accepted;
    std::size_t escalations = 0;
    std::size_t clamps = 0;
    double objective_after = 0.0;
};

// Repeat-until loop of the convergent driver: apply the update with the
// current delta, grow delta, retry until the staged objective is
// nonincreasing. The accepted candidate always used the pre-growth delta.
BlockOutcome monotone_block(const DenseMatrix& x, const AdditiveBlock& blk,
                            const SolverConfig& cfg, double j_ref,
                            const std::function<double(const DenseMatrix&)>& staged_objective,
                            const IterationTrace& trace_so_far, const char* where) {
    double delta = cfg.delta;
    for (std::size_t trial = 0;; ++trial) {
        std::size_t clamps = 0;
        DenseMatrix cand = apply_additive(x, blk, delta, clamps, where);
        delta *= cfg.step;
        const double j_new = staged_objective(cand);
        if (j_new <= j_ref) {
            return BlockOutcome{std::move(cand), trial, clamps, j_new};
        }
        if (trial >= cfg.max_inner_iters) {
            throw InnerLoopError(std::string(where) +
                                     " block: no nonincreasing step within " +
                                     std::to_string(cfg.max_inner_iters) + " delta escalations",
                                 trace_so_far);
        }
    }
}

double kkt_overall_value(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp,
                         bool include_s) {
    if (include_s) return kkt_residual(a, model, hp).overall;
    double min_b = 0.0, slack_b = 0.0, min_c = 0.0, slack_c = 0.0;
    factor_kkt(model.B, grad_wrt_b(a, model.B, model.S, model.C, hp.beta), min_b, slack_b);
    factor_kkt(model.C, grad_wrt_c(a, model.B, model.S, model.C, hp.alpha), min_c, slack_c);
    return std::max({-min_b, -min_c, slack_b, slack_c, 0.0});
}

void record_iteration(IterationTrace& trace, double objective,
                      std::array<std::size_t, 3> inner, double kkt, double ms) {
    trace.objective.push_back(objective);
    trace.inner_counts.push_back(inner);
    trace.kkt_overall.push_back(kkt);
    trace.wall_ms.push_back(ms);
}

FactorModel make_initial(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                         const FactorModel* initial) {
    if (cfg.init == InitKind::provided || initial != nullptr) {
        if (initial == nullptr) {
            throw ShapeError("solver: init=provided but no initial model given");
        }
        initial->validate_shapes(a.rows(), a.cols());
        return *initial;
    }
    return init_factors(a.rows(), a.cols(), hp.p, hp.q, cfg);
}

// Shared fixed-sweep harness for the non-monotone drivers.
template <typename StepFn>
SolveResult fixed_sweep_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                              const FactorModel* initial, const SolveHooks* hooks,
                              const StepFn& sweep, bool kkt_with_s = true) {
    cfg.validate();
    hp.validate();
    FactorModel model = make_initial(a, hp, cfg, initial);
    IterationTrace trace;
    record_iteration(trace, objective_bnmtf(a, model, hp), {0, 0, 0},
                     kkt_overall_value(a, model, hp, kkt_with_s), 0.0);
    for (std::size_t k = 0; k < cfg.max_outer_iters; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        model = sweep(model);
        record_iteration(trace, objective_bnmtf(a, model, hp), {0, 0, 0},
                         kkt_overall_value(a, model, hp, kkt_with_s), elapsed_ms(t0));
        if (hooks != nullptr && hooks->on_sweep) hooks->on_sweep(k, model);
    }
    return SolveResult{std::move(model), std::move(trace)};
}

SolveResult convergent_solve_impl(const DataMatrix& a, const Hyperparams& hp,
                                  const SolverConfig& cfg, const FactorModel* initial,
                                  const SolveHooks* hooks, bool update_s) {
    cfg.validate();
    hp.validate();
    FactorModel model = make_initial(a, hp, cfg, initial);
    model.validate_shapes(a.rows(), a.cols());

    IterationTrace trace;
    const double j0 = objective_bnmtf(a, model, hp);
    record_iteration(trace, j0, {0, 0, 0}, kkt_overall_value(a, model, hp, update_s), 0.0);
    if (trace.kkt_overall.back() < kKktTol) {
        trace.converged_at = 0;
        return SolveResult{std::move(model), std::move(trace)};
    }

    for (std::size_t k = 0; k < cfg.max_outer_iters; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        std::array<std::size_t, 3> inner{0, 0, 0};
        double j_before = trace.objective.back();

        {
            const AdditiveBlock blk =
                prepare_block_b(a, model.B, model.S, model.C, hp.beta, cfg.sigma);
            BlockOutcome out = monotone_block(
                model.B, blk, cfg, j_before,
                [&](const DenseMatrix& cand) {
                    return objective_bnmtf(a, FactorModel{cand, model.S, model.C}, hp);
                },
                trace, "convergent_solve: B");
            if (hooks != nullptr && hooks->on_block) {
                hooks->on_block({k, 'B', j_before, out.objective_after, out.escalations});
            }
            model.B = std::move(out.accepted);
            inner[0] = out.escalations;
            trace.clamp_events += out.clamps;
            j_before = out.objective_after;
        }
        {
            const AdditiveBlock blk =
                prepare_block_c(a, model.B, model.S, model.C, hp.alpha, cfg.sigma);
            BlockOutcome out = monotone_block(
                model.C, blk, cfg, j_before,
                [&](const DenseMatrix& cand) {
                    return objective_bnmtf(a, FactorModel{model.B, model.S, cand}, hp);
                },
                trace, "convergent_solve: C");
            if (hooks != nullptr && hooks->on_block) {
                hooks->on_block({k, 'C', j_before, out.objective_after, out.escalations});
            }
            model.C = std::move(out.accepted);
            inner[1] = out.escalations;
            trace.clamp_events += out.clamps;
            j_before = out.objective_after;
        }
        if (update_s) {
            const AdditiveBlock blk = prepare_block_s(a, model.B, model.S, model.C, cfg.sigma);
            BlockOutcome out = monotone_block(
                model.S, blk, cfg, j_before,
                [&](const DenseMatrix& cand) {
                    return objective_bnmtf(a, FactorModel{model.B, cand, model.C}, hp);
                },
                trace, "convergent_solve: S");
            if (hooks != nullptr && hooks->on_block) {
                hooks->on_block({k, 'S', j_before, out.objective_after, out.escalations});
            }
            model.S = std::move(out.accepted);
            inner[2] = out.escalations;
            trace.clamp_events += out.clamps;
            j_before = out.objective_after;
        }

        const double kkt = kkt_overall_value(a, model, hp, update_s);
        record_iteration(trace, j_before, inner, kkt, elapsed_ms(t0));
        if (hooks != nullptr && hooks->on_sweep) hooks->on_sweep(k, model);

        const std::size_t last = trace.objective.size() - 1;
        const double diff = std::abs(trace.objective[last - 1] - trace.objective[last]);
        if (diff <= kObjDiffRel * trace.objective.front() && kkt < kKktTol) {
            trace.converged_at = last;
            break;
        }
    }
    return SolveResult{std::move(model), std::move(trace)};
}

// MUR sweep body, shared by the bi- and uni-orthogonal variants.
FactorModel mur_sweep(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp,
                      const SolverConfig& cfg, bool update_s) {
    const DenseMatrix& b = model.B;
    const DenseMatrix& s = model.S;
    const DenseMatrix& c = model.C;

    const DenseMatrix cct = matmul(c, c, false, true);
    DenseMatrix num_b = matmul(matmul(a, c, false, true), s, false, true);
    if (hp.beta != 0.0) num_b = add_scaled(num_b, b, hp.beta);
    DenseMatrix den_b = matmul(b, matmul(matmul(s, cct), s, false, true));
    if (hp.beta != 0.0) den_b = add_scaled(den_b, matmul(b, matmul(b, b, true, false)), hp.beta);
    const DenseMatrix b_new = multiplicative_update(b, num_b, den_b, cfg.delta, "mur_step: B");

    DenseMatrix num_c = matmul(matmul(a, b_new, true, false), s).transposed();
    if (hp.alpha != 0.0) num_c = add_scaled(num_c, c, hp.alpha);
    const DenseMatrix btb_new = matmul(b_new, b_new, true, false);
    DenseMatrix den_c = matmul(matmul(matmul(s, btb_new, true, false), s), c);
    if (hp.alpha != 0.0) den_c = add_scaled(den_c, matmul(cct, c), hp.alpha);
    const DenseMatrix c_new = multiplicative_update(c, num_c, den_c, cfg.delta, "mur_step: C");

    if (!update_s) return FactorModel{b_new, s, c_new};

    const DenseMatrix num_s = matmul(b_new, matmul(a, c_new, false, true), true, false);
    const DenseMatrix den_s =
        matmul(matmul(btb_new, s), matmul(c_new, c_new, false, true));
    const DenseMatrix s_new = multiplicative_update(s, num_s, den_s, cfg.delta, "mur_step: S");
    return FactorModel{b_new, s_new, c_new};
}

}  // namespace

const char* to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::ding_bnmtf: return "ding_bnmtf";
        case Algorithm::mur_bnmtf: return "mur_bnmtf";
        case Algorithm::aur_bnmtf: return "aur_bnmtf";
        case Algorithm::convergent_bnmtf: return "convergent_bnmtf";
        case Algorithm::ls_nmf: return "ls_nmf";
        case Algorithm::mur_uortho: return "mur_uortho";
        case Algorithm::convergent_uortho: return "convergent_uortho";
    }
    return "unknown";
}

std::optional<Algorithm> algorithm_from_string(const std::string& name) {
    for (Algorithm alg :
         {Algorithm::ding_bnmtf, Algorithm::mur_bnmtf, Algorithm::aur_bnmtf,
          Algorithm::convergent_bnmtf, Algorithm::ls_nmf, Algorithm::mur_uortho,
          Algorithm::convergent_uortho}) {
        if (name == to_string(alg)) return alg;
    }
    return std::nullopt;
}

bool is_multiplicative(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::ding_bnmtf:
        case Algorithm::mur_bnmtf:
        case Algorithm::ls_nmf:
        case Algorithm::mur_uortho: return true;
        default: return false;
    }
}

void SolverConfig::validate() const {
    if (!(delta > 0.0) && delta != 0.0) throw ShapeError("SolverConfig: delta must be >= 0");
    if (!(sigma > 0.0)) throw ShapeError("SolverConfig: sigma must be > 0");
    if (!(step > 1.0)) throw ShapeError("SolverConfig: step must be > 1");
    if (max_inner_iters < 1) throw ShapeError("SolverConfig: max_inner_iters must be >= 1");
}

DenseMatrix safeguard_factor(const DenseMatrix& factor, const DenseMatrix& grad, double sigma) {
    if (!factor.same_shape(grad)) {
        throw ShapeError("safeguard_factor: factor and gradient shapes differ");
    }
    DenseMatrix out(factor.rows(), factor.cols());
    for (std::size_t k = 0; k < factor.size(); ++k) {
        const double x = factor.values()[k];
        out.values()[k] = grad.values()[k] >= 0.0 ? x : std::max(x, sigma);
    }
    return out;
}

SafeguardedFactors safeguard(const FactorModel& model, const Gradients& grads, double sigma) {
    return SafeguardedFactors{safeguard_factor(model.B, grads.wrt_b, sigma),
                              safeguard_factor(model.C, grads.wrt_c, sigma),
                              safeguard_factor(model.S, grads.wrt_s, sigma)};
}

FactorModel init_factors(std::size_t m, std::size_t n, std::size_t p, std::size_t q,
                         const SolverConfig& cfg) {
    UniformRng rng(cfg.seed);
    const bool positive = is_multiplicative(cfg.algorithm);
    FactorModel model{DenseMatrix(m, p), DenseMatrix(p, q), DenseMatrix(q, n)};
    fill_uniform(model.B, rng, positive);
    fill_uniform(model.S, rng, positive);
    fill_uniform(model.C, rng, positive);
    return model;
}

FactorModel ding_step(const DataMatrix& a, const FactorModel& model, const SolverConfig& cfg) {
    model.validate_shapes(a.rows(), a.cols());
    const DenseMatrix& b = model.B;
    const DenseMatrix& s = model.S;
    const DenseMatrix& c = model.C;

    // b <- b .* (A C^T S^T) / (B B^T A C^T S^T + delta)
    const DenseMatrix act = matmul(a, c, false, true);
    const DenseMatrix num_b = matmul(act, s, false, true);
    const DenseMatrix den_b = matmul(b, matmul(matmul(b, act, true, false), s, false, true));
    const DenseMatrix b_new = multiplicative_update(b, num_b, den_b, cfg.delta, "ding_step: B");

    // c <- c .* (S^T B+^T A) / (S^T B+^T A C^T C + delta)
    const DenseMatrix num_c = matmul(matmul(a, b_new, true, false), s).transposed();
    const DenseMatrix stbtact = matmul(s, matmul(b_new, act, true, false), true, false);
    const DenseMatrix den_c = matmul(stbtact, c);
    const DenseMatrix c_new = multiplicative_update(c, num_c, den_c, cfg.delta, "ding_step: C");

    // s <- s .* (B+^T A C+^T) / (B+^T B+ S C+ C+^T + delta)
    const DenseMatrix num_s = matmul(b_new, matmul(a, c_new, false, true), true, false);
    const DenseMatrix den_s = matmul(matmul(matmul(b_new, b_new, true, false), s),
                                     matmul(c_new, c_new, false, true));
    const DenseMatrix s_new = multiplicative_update(s, num_s, den_s, cfg.delta, "ding_step: S");

    return FactorModel{b_new, s_new, c_new};
}

FactorModel mur_step(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp,
                     const SolverConfig& cfg) {
    model.validate_shapes(a.rows(), a.cols());
    return mur_sweep(a, model, hp, cfg, true);
}

AurStepResult aur_step(const DataMatrix& a, const FactorModel& model, const Hyperparams& hp,
                       const SolverConfig& cfg, double delta_b, double delta_c, double delta_s) {
    model.validate_shapes(a.rows(), a.cols());
    std::array<std::size_t, 3> clamped{0, 0, 0};

    const AdditiveBlock blk_b = prepare_block_b(a, model.B, model.S, model.C, hp.beta, cfg.sigma);
    const DenseMatrix b_new = apply_additive(model.B, blk_b, delta_b, clamped[0], "aur_step: B");

    const AdditiveBlock blk_c = prepare_block_c(a, b_new, model.S, model.C, hp.alpha, cfg.sigma);
    const DenseMatrix c_new = apply_additive(model.C, blk_c, delta_c, clamped[1], "aur_step: C");

    const AdditiveBlock blk_s = prepare_block_s(a, b_new, model.S, c_new, cfg.sigma);
    const DenseMatrix s_new = apply_additive(model.S, blk_s, delta_s, clamped[2], "aur_step: S");

    return AurStepResult{FactorModel{b_new, s_new, c_new}, clamped};
}

std::pair<DenseMatrix, DenseMatrix> ls_nmf_step(const DataMatrix& a, const DenseMatrix& b,
                                                const DenseMatrix& c, const SolverConfig& cfg) {
    const DenseMatrix num_b = matmul(a, c, false, true);
    const DenseMatrix den_b = matmul(b, matmul(c, c, false, true));
    const DenseMatrix b_new = multiplicative_update(b, num_b, den_b, cfg.delta, "ls_nmf_step: B");

    const DenseMatrix num_c = matmul(a, b_new, true, false).transposed();
    const DenseMatrix den_c = matmul(matmul(b_new, b_new, true, false), c);
    const DenseMatrix c_new = multiplicative_update(c, num_c, den_c, cfg.delta, "ls_nmf_step: C");
    return {b_new, c_new};
}

SolveResult ding_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                       const FactorModel* initial, const SolveHooks* hooks) {
    // The original scheme has no orthogonality weights; the trace records
    // the plain fit term.
    Hyperparams fit_only = hp;
    fit_only.alpha = 0.0;
    fit_only.beta = 0.0;
    return fixed_sweep_solve(a, fit_only, cfg, initial, hooks,
                             [&](const FactorModel& m) { return ding_step(a, m, cfg); });
}

SolveResult mur_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                      const FactorModel* initial, const SolveHooks* hooks) {
    return fixed_sweep_solve(a, hp, cfg, initial, hooks,
                             [&](const FactorModel& m) { return mur_step(a, m, hp, cfg); });
}

SolveResult aur_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                      const FactorModel* initial, const SolveHooks* hooks) {
    std::size_t clamp_events = 0;
    SolveResult result =
        fixed_sweep_solve(a, hp, cfg, initial, hooks, [&](const FactorModel& m) {
            AurStepResult step = aur_step(a, m, hp, cfg, cfg.delta, cfg.delta, cfg.delta);
            clamp_events += step.clamped[0] + step.clamped[1] + step.clamped[2];
            return std::move(step.model);
        });
    result.trace.clamp_events = clamp_events;
    return result;
}

SolveResult convergent_solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                             const FactorModel* initial, const SolveHooks* hooks) {
    return convergent_solve_impl(a, hp, cfg, initial, hooks, true);
}

TwoFactorResult ls_nmf_solve(const DataMatrix& a, std::size_t rank, const SolverConfig& cfg,
                             const DenseMatrix* b0, const DenseMatrix* c0) {
    cfg.validate();
    if (rank < 1) throw ShapeError("ls_nmf_solve: rank must be >= 1");
    FactorModel model = init_factors(a.rows(), a.cols(), rank, rank, cfg);
    if (b0 != nullptr) model.B = *b0;
    if (c0 != nullptr) model.C = *c0;
    model.S = DenseMatrix::identity(rank);
    const Hyperparams hp{0.0, 0.0, rank, rank};

    IterationTrace trace;
    record_iteration(trace, objective_plain(a, model.B, model.C), {0, 0, 0},
                     kkt_overall_value(a, model, hp, false), 0.0);
    for (std::size_t k = 0; k < cfg.max_outer_iters; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        auto [b_new, c_new] = ls_nmf_step(a, model.B, model.C, cfg);
        model.B = std::move(b_new);
        model.C = std::move(c_new);
        record_iteration(trace, objective_plain(a, model.B, model.C), {0, 0, 0},
                         kkt_overall_value(a, model, hp, false), elapsed_ms(t0));
    }
    return TwoFactorResult{std::move(model.B), std::move(model.C), std::move(trace)};
}

TwoFactorResult uortho_solve(const DataMatrix& a, double alpha, std::size_t rank,
                             const SolverConfig& cfg, const DenseMatrix* b0,
                             const DenseMatrix* c0) {
    cfg.validate();
    if (alpha < 0.0) throw ShapeError("uortho_solve: alpha must be >= 0");
    if (rank < 1) throw ShapeError("uortho_solve: rank must be >= 1");
    const Hyperparams hp{alpha, 0.0, rank, rank};

    FactorModel start = init_factors(a.rows(), a.cols(), rank, rank, cfg);
    if (b0 != nullptr) start.B = *b0;
    if (c0 != nullptr) start.C = *c0;
    start.S = DenseMatrix::identity(rank);

    SolveResult result;
    if (cfg.algorithm == Algorithm::convergent_uortho) {
        result = convergent_solve_impl(a, hp, cfg, &start, nullptr, false);
    } else if (cfg.algorithm == Algorithm::mur_uortho) {
        result = fixed_sweep_solve(
            a, hp, cfg, &start, nullptr,
            [&](const FactorModel& m) { return mur_sweep(a, m, hp, cfg, false); },
            /*kkt_with_s=*/false);
    } else {
        throw ShapeError("uortho_solve: cfg.algorithm must be mur_uortho or convergent_uortho");
    }
    return TwoFactorResult{std::move(result.model.B), std::move(result.model.C),
                           std::move(result.trace)};
}

SolveResult solve(const DataMatrix& a, const Hyperparams& hp, const SolverConfig& cfg,
                  const FactorModel* initial, const SolveHooks* hooks) {
    switch (cfg.algorithm) {
        case Algorithm::ding_bnmtf: return ding_solve(a, hp, cfg, initial, hooks);
        case Algorithm::mur_bnmtf: return mur_solve(a, hp, cfg, initial, hooks);
        case Algorithm::aur_bnmtf: return aur_solve(a, hp, cfg, initial, hooks);
        case Algorithm::convergent_bnmtf: return convergent_solve(a, hp, cfg, initial, hooks);
        case Algorithm::ls_nmf: {
            TwoFactorResult two = ls_nmf_solve(a, hp.p, cfg);
            return SolveResult{
                FactorModel{std::move(two.b), DenseMatrix::identity(hp.p), std::move(two.c)},
                std::move(two.trace)};
        }
        case Algorithm::mur_uortho:
        case Algorithm::convergent_uortho: {
            TwoFactorResult two = uortho_solve(a, hp.alpha, hp.q, cfg);
            return SolveResult{
                FactorModel{std::move(two.b), DenseMatrix::identity(hp.q), std::move(two.c)},
                std::move(two.trace)};
        }
    }
    throw ShapeError("solve: unknown algorithm");
}

std::size_t count_monotonicity_violations(const std::vector<double>& objective,
                                          double rel_slack) {
    if (objective.size() < 2) return 0;
    const double slack = rel_slack * objective.front();
    std::size_t violations = 0;
    for (std::size_t k = 0; k + 1 < objective.size(); ++k) {
        if (objective[k + 1] > objective[k] + slack) ++violations;
    }
    return violations;
}

}  // namespace onmf
