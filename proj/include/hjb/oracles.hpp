#pragma once

#include <functional>

#include "hjb/control_problem.hpp"
#include "hjb/grid.hpp"
#include "hjb/scheme.hpp"

// Brute-force reference computations used by the test suites and the
// `check` command. None of them call the closed-form greedy map or the
// Riccati coefficient they are meant to cross-check.
namespace hjb::oracle {

struct ControlMin {
    Vec argmin{};
    double value = 0.0;
};

/// Minimises a componentwise-separable convex objective over [-a_max, a_max]^dim:
/// a uniform scan with `samples_per_axis` points per axis, then golden-section
/// refinement of each coordinate inside the bracket of the best sample.
ControlMin minimize_over_box(const std::function<double(const Vec&)>& objective, int dim,
                             double a_max, int samples_per_axis);

/// Minimum of the scanned control grid alone (no refinement).
ControlMin scan_box(const std::function<double(const Vec&)>& objective, int dim, double a_max,
                    int samples_per_axis);

/// max over controls of L_a^h U at an interior node, by minimize_over_box.
double scanned_policy_operator_max(const ControlProblem& problem, const SchemeParams& params,
                                   const GridField& field, std::size_t flat, int samples_per_axis);

struct LqValueIteration {
    double fitted_p = 0.0;  // 2 * quadratic coefficient of the least-squares fit
    int iterations = 0;
    double final_update = 0.0;
};

/// Semi-Lagrangian discounted value iteration for x' = a, c = (x^2 + a^2)/2 on
/// [-L, L] with linear interpolation and state-constrained (clamped) steps:
///   V(x) <- min_a { c(x, a) dt + exp(-lambda dt) V(clamp(x + a dt)) }
/// run from V = 0 until the sup-norm update is <= tol, then fitted with
/// c0 + c2 x^2 on |x| <= fit_half_width.
LqValueIteration lq_value_iteration(double lambda, double half_width, double h, double dt,
                                    double a_max, double fit_half_width, double tol = 1e-11,
                                    int max_iter = 200000);

}  // namespace hjb::oracle
