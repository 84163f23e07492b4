#pragma once

#include <stdexcept>
#include <string>

#include "hjb/control_problem.hpp"
#include "hjb/grid.hpp"

namespace hjb {

/// Raised when a stencil would have a positive neighbour coefficient.
class MonotonicityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// How the artificial-viscosity coefficient N is chosen.
///   theory  : max{1, |f|_inf / 2}, |f|_inf over grid nodes x box corners
///   bench1d : max{1, a_max / 2}
///   bench2d : 1.05 * (|b|_inf + a_max) / 2, |b|_inf the grid max component
enum class ViscosityMode { theory, bench1d, bench2d };

struct SchemeParams {
    double viscosity;  // N
    double h;
    int dim;
    double lambda;

    /// lambda + 2 d N / h
    double center() const noexcept { return lambda + 2.0 * dim * viscosity / h; }
};

/// Coefficients of U(x), U(x + h e_i) and U(x - h e_i) in L_a^h U(x).
struct StencilCoeffs {
    double center;
    Vec plus;
    Vec minus;
};

double viscosity_coefficient(const ControlProblem& problem, const Grid& grid, ViscosityMode mode);
SchemeParams make_scheme_params(const ControlProblem& problem, const Grid& grid, ViscosityMode mode);

/// max over nodes and box corners of max_i |f_i(x, a)|.
double drift_sup(const ControlProblem& problem, const Grid& grid);

/// Throws MonotonicityError unless N >= max{1, drift_sup / 2}.
void certify_monotone(const ControlProblem& problem, const Grid& grid, const SchemeParams& params);

/// Throws MonotonicityError if a neighbour coefficient is positive.
StencilCoeffs stencil_coefficients(const SchemeParams& params, const Vec& drift);

/// lambda U - c_a - f_a . grad_h U - N h lap_h U at interior nodes; zero on the boundary.
GridField apply_policy_operator(const ControlProblem& problem, const SchemeParams& params,
                                const PolicyField& policy, const GridField& field);

/// F_h[U] = lambda U + H(x, grad_h U) - N h lap_h U at interior nodes; zero on the boundary.
GridField bellman_residual(const ControlProblem& problem, const SchemeParams& params,
                           const GridField& field);

/// T_a U for the given policy. Boundary entries carry the input's boundary data.
GridField resolvent_map(const ControlProblem& problem, const SchemeParams& params,
                        const GridField& field, const PolicyField& policy);

/// T U = min over controls of T_a U, attained at the greedy control for grad_h U.
GridField resolvent_map(const ControlProblem& problem, const SchemeParams& params,
                        const GridField& field);

/// beta_h = (2 d N / h) / (lambda + 2 d N / h).
double contraction_factor(double lambda, int dim, double viscosity, double h);

std::string to_string(ViscosityMode mode);
ViscosityMode parse_viscosity_mode(const std::string& name);

}  // namespace hjb
