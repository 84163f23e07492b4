#include "hjb/policy_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hjb/analysis.hpp"

namespace hjb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Mesh-weighted L2 and max norms of a - b.
std::pair<double, double> difference_norms(const GridField& a, const GridField& b) {
    const ErrorNorms e = error_metrics(a, b);
    return {e.l2, e.linf};
}

double max_increase(const GridField& next, const GridField& prev) {
    double m = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k)
        if (next.grid().interior(k)) m = std::max(m, next[k] - prev[k]);
    return m;
}

void validate(const PIConfig& config) {
    if (config.max_outer_iterations < 1) throw std::invalid_argument("PI needs at least one iteration");
    if (!(config.theta > 0.0 && config.theta <= 1.0))
        throw std::invalid_argument("relaxation weight theta must lie in (0, 1]");
    if (config.outer_tolerance && !(*config.outer_tolerance > 0.0))
        throw std::invalid_argument("outer tolerance must be positive");
    if (!(config.solver.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
}

}  // namespace

InitialPolicyKind parse_initial_policy(const std::string& name) {
    if (name == "zero") return InitialPolicyKind::zero;
    if (name == "adversarial2d") return InitialPolicyKind::adversarial2d;
    throw std::invalid_argument("unknown initial policy '" + name + "'");
}

std::string to_string(InitialPolicyKind kind) {
    return kind == InitialPolicyKind::zero ? "zero" : "adversarial2d";
}

std::string to_string(StopReason reason) {
    return reason == StopReason::converged ? "converged" : "iteration_limit";
}

PolicyField initial_policy(InitialPolicyKind kind, const Grid& grid, const ControlProblem& problem) {
    PolicyField policy(grid, problem.a_max());
    if (kind == InitialPolicyKind::zero) return policy;

    if (grid.dim() != 2) throw std::invalid_argument("adversarial2d initial policy needs a 2D grid");
    const GridField v = GridField::sample(grid, [](const Vec& z) { return manufactured_value(z[0], z[1]); });
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        if (!grid.interior(k)) continue;
        const Vec z = grid.point(k);
        const Vec grad = gradient_at(v, k);  // = -a_h*
        const Vec wobble{0.3 * std::sin(2.0 * z[0] + 1.0) * std::cos(z[1]),
                         0.3 * std::cos(z[0]) * std::sin(2.0 * z[1] - 0.5)};
        policy.set(k, problem.clip(Vec{grad[0] + wobble[0], grad[1] + wobble[1]}));
    }
    return policy;
}

Evaluation policy_evaluate(const ControlProblem& problem, const SchemeParams& params,
                           const PolicyField& policy, const GridField& boundary,
                           const SorSettings& solver, const GridField* warm_start) {
    EvaluationSystem system = assemble_evaluation_system(problem, params, policy, boundary);

    if (auto* tri = std::get_if<TridiagonalSystem>(&system)) {
        const std::vector<double> x = solve_tridiagonal(*tri);
        return {scatter_interior(boundary, x), SolveStats{1, 0.0, true}};
    }

    const auto& sys = std::get<StructuredSystem2D>(system);
    std::vector<double> initial;
    if (warm_start) initial = gather_interior(*warm_start);
    SorResult r = solve_sor(sys, solver, initial);
    SolveStats stats = r.stats;
    GridField value = scatter_interior(boundary, r.solution);

    // The update-norm stop leaves a residual of roughly center * tol. Keep
    // sweeping with a tighter update tolerance until L_a V is within 10 * tol.
    SorSettings tighter = solver;
    while (stats.converged &&
           apply_policy_operator(problem, params, policy, value).sup_norm() > 10.0 * solver.tol) {
        tighter.tol *= 0.1;
        tighter.max_iter = solver.max_iter - stats.iterations;
        if (tighter.max_iter <= 0 || tighter.tol < 1e-300) {
            stats.converged = false;
            break;
        }
        r = solve_sor(sys, tighter, r.solution);
        stats.iterations += r.stats.iterations;
        stats.final_update_norm = r.stats.final_update_norm;
        stats.converged = r.stats.converged;
        value = scatter_interior(boundary, r.solution);
    }
    if (!stats.converged)
        throw SolverError("SOR did not converge in " + std::to_string(stats.iterations) +
                          " sweeps (last update " + std::to_string(stats.final_update_norm) + ")");
    return {std::move(value), stats};
}

PolicyField policy_improve(const ControlProblem& problem, const GridField& field,
                           const PolicyField& prev, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    const Grid& g = field.grid();
    if (!(g == prev.grid())) throw std::invalid_argument("field and policy live on different grids");
    PolicyField next(g, prev.a_max());
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (!g.interior(k)) continue;
        const Vec target = greedy_policy(problem, g.point(k), gradient_at(field, k));
        Vec mixed{};
        for (int i = 0; i < g.dim(); ++i) mixed[i] = (1.0 - theta) * prev[k][i] + theta * target[i];
        next.set(k, problem.clip(mixed));
    }
    return next;
}

PIReport run_policy_iteration(const ControlProblem& problem, const SchemeParams& params,
                              const GridField& boundary, const PIConfig& config,
                              const GridField* reference, const IterationObserver& observer) {
    validate(config);
    const Grid& grid = boundary.grid();
    if (reference && !(reference->grid() == grid))
        throw std::invalid_argument("reference lives on a different grid");

    PolicyField policy = initial_policy(config.initial_policy, grid, problem);
    const bool greedy = config.theta == 1.0;
    const double increase_tol = 10.0 * config.solver.tol;

    std::vector<IterationRecord> records;
    std::optional<GridField> prev;
    StopReason stop = StopReason::iteration_limit;
    bool monotone = true;

    for (int n = 0; n < config.max_outer_iterations; ++n) {
        Evaluation eval = policy_evaluate(problem, params, policy, boundary, config.solver,
                                          prev ? &*prev : &boundary);
        IterationRecord rec;
        rec.iter = n;
        rec.solve = eval.stats;
        if (reference) {
            const ErrorNorms e = error_metrics(eval.value, *reference);
            rec.linf_error = e.linf;
            rec.l2_error = e.l2;
        } else {
            rec.linf_error = rec.l2_error = kNaN;
        }
        if (prev) {
            std::tie(rec.residual_l2, rec.residual_linf) = difference_norms(eval.value, *prev);
            rec.monotonicity_violation = max_increase(eval.value, *prev);
            if (rec.monotonicity_violation > increase_tol) monotone = false;
        } else {
            rec.residual_l2 = rec.residual_linf = rec.monotonicity_violation = kNaN;
        }
        records.push_back(rec);
        if (observer) observer(n, eval.value, policy);

        prev = std::move(eval.value);
        if (config.outer_tolerance && n > 0 && rec.residual_linf <= *config.outer_tolerance) {
            stop = StopReason::converged;
            break;
        }
        if (n + 1 < config.max_outer_iterations) {
            PolicyField next = policy_improve(problem, *prev, policy, config.theta);
            policy = std::move(next);
        }
    }

    PIReport report{std::move(records), std::move(*prev), std::move(policy), stop, std::nullopt};
    if (greedy) report.monotone_decrease_holds = monotone;
    return report;
}

}  // namespace hjb
