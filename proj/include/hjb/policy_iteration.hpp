#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hjb/control_problem.hpp"
#include "hjb/grid.hpp"
#include "hjb/linsolve.hpp"
#include "hjb/scheme.hpp"

namespace hjb {

enum class InitialPolicyKind {
    zero,           // a_0 = 0
    adversarial2d,  // clip(grad_h V* + 0.3 (sin(2x+1) cos y, cos x sin(2y-0.5)))
};

InitialPolicyKind parse_initial_policy(const std::string& name);
std::string to_string(InitialPolicyKind kind);

PolicyField initial_policy(InitialPolicyKind kind, const Grid& grid, const ControlProblem& problem);

struct PIConfig {
    int max_outer_iterations = 50;
    double theta = 1.0;  // relaxation weight; 1 is the pure greedy update
    InitialPolicyKind initial_policy = InitialPolicyKind::zero;
    /// Stop once |V_n - V_{n-1}|_inf <= outer_tolerance. Unset: run all iterations.
    std::optional<double> outer_tolerance;
    SorSettings solver;
};

struct Evaluation {
    GridField value;
    SolveStats stats;
};

/// Solves L_a^h V = 0 with the Dirichlet data of `boundary`: Thomas in 1D,
/// SOR in 2D warm-started from `warm_start` (if given). Throws SolverError
/// when SOR does not converge.
Evaluation policy_evaluate(const ControlProblem& problem, const SchemeParams& params,
                           const PolicyField& policy, const GridField& boundary,
                           const SorSettings& solver, const GridField* warm_start = nullptr);

/// (1 - theta) prev + theta clip(greedy(grad_h field)), clipped componentwise.
PolicyField policy_improve(const ControlProblem& problem, const GridField& field,
                           const PolicyField& prev, double theta);

struct IterationRecord {
    int iter = 0;
    double linf_error = 0.0;  // NaN without a reference
    double l2_error = 0.0;    // NaN without a reference
    double residual_l2 = 0.0;    // |V_n - V_{n-1}|, mesh-weighted; NaN at n = 0
    double residual_linf = 0.0;  // NaN at n = 0
    double monotonicity_violation = 0.0;  // max(0, max_x V_n - V_{n-1}); NaN at n = 0
    SolveStats solve;
};

enum class StopReason { iteration_limit, converged };
std::string to_string(StopReason reason);

struct PIReport {
    std::vector<IterationRecord> records;
    GridField final_value;
    PolicyField final_policy;  // the policy whose evaluation is final_value
    StopReason stop = StopReason::iteration_limit;
    /// Greedy mode only: every step satisfied V_{n+1} <= V_n + 10 * solver tol.
    std::optional<bool> monotone_decrease_holds;
};

/// Called after each evaluation with (n, V_n, a_n).
using IterationObserver = std::function<void(int, const GridField&, const PolicyField&)>;

PIReport run_policy_iteration(const ControlProblem& problem, const SchemeParams& params,
                              const GridField& boundary, const PIConfig& config,
                              const GridField* reference = nullptr,
                              const IterationObserver& observer = {});

}  // namespace hjb
