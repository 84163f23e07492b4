#include "hjb/scheme.hpp"

#include <algorithm>
#include <cmath>

namespace hjb {

namespace {

void check_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

Vec drift_at(const ControlProblem& problem, const Grid& grid, std::size_t flat, const Vec& a) {
    Vec f = problem.drift_base(grid.point(flat));
    for (int k = 0; k < grid.dim(); ++k) f[k] += a[k];
    return f;
}

// Weighted neighbour sum of T_a without the running cost.
double neighbour_sum(const SchemeParams& params, const GridField& field, std::size_t flat,
                     const Vec& f) {
    const Grid& g = field.grid();
    const double nh = params.viscosity / params.h;
    const double inv2h = 1.0 / (2.0 * params.h);
    double s = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        const std::size_t st = g.stride(i);
        s += (nh + f[i] * inv2h) * field[flat + st] + (nh - f[i] * inv2h) * field[flat - st];
    }
    return s;
}

}  // namespace

double drift_sup(const ControlProblem& problem, const Grid& grid) {
    // f = b + a is affine in a, so the extremes sit at box corners:
    // max_i |b_i + a_i| = |b_i| + a_max.
    return problem.drift_base_sup(grid) + problem.a_max();
}

double viscosity_coefficient(const ControlProblem& problem, const Grid& grid, ViscosityMode mode) {
    switch (mode) {
        case ViscosityMode::theory:
            return std::max(1.0, 0.5 * drift_sup(problem, grid));
        case ViscosityMode::bench1d:
            return std::max(1.0, 0.5 * problem.a_max());
        case ViscosityMode::bench2d:
            return 1.05 * 0.5 * (problem.drift_base_sup(grid) + problem.a_max());
    }
    throw std::invalid_argument("unknown viscosity mode");
}

SchemeParams make_scheme_params(const ControlProblem& problem, const Grid& grid, ViscosityMode mode) {
    if (problem.dim() != grid.dim()) throw std::invalid_argument("problem and grid dimensions differ");
    return SchemeParams{viscosity_coefficient(problem, grid, mode), grid.h(), grid.dim(),
                        problem.lambda()};
}

void certify_monotone(const ControlProblem& problem, const Grid& grid, const SchemeParams& params) {
    const double required = std::max(1.0, 0.5 * drift_sup(problem, grid));
    if (params.viscosity < required)
        throw MonotonicityError("viscosity N=" + std::to_string(params.viscosity) +
                                " is below the monotonicity threshold " + std::to_string(required));
}

StencilCoeffs stencil_coefficients(const SchemeParams& params, const Vec& drift) {
    StencilCoeffs s{params.center(), Vec{}, Vec{}};
    const double nh = params.viscosity / params.h;
    const double inv2h = 1.0 / (2.0 * params.h);
    for (int i = 0; i < params.dim; ++i) {
        s.plus[i] = -nh - drift[i] * inv2h;
        s.minus[i] = -nh + drift[i] * inv2h;
        if (s.plus[i] > 0.0 || s.minus[i] > 0.0)
            throw MonotonicityError("positive neighbour coefficient: drift component " +
                                    std::to_string(drift[i]) + " exceeds 2N=" +
                                    std::to_string(2.0 * params.viscosity));
    }
    return s;
}

GridField apply_policy_operator(const ControlProblem& problem, const SchemeParams& params,
                                const PolicyField& policy, const GridField& field) {
    const Grid& g = field.grid();
    check_same_grid(g, policy.grid());
    GridField out(g);
    const double nh = params.viscosity * params.h;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (!g.interior(k)) continue;
        const Vec& a = policy[k];
        const Vec f = drift_at(problem, g, k, a);
        const Vec p = gradient_at(field, k);
        out[k] = params.lambda * field[k] - running_cost_at(problem, g, k, a) -
                 (f[0] * p[0] + f[1] * p[1]) - nh * laplacian_at(field, k);
    }
    return out;
}

GridField bellman_residual(const ControlProblem& problem, const SchemeParams& params,
                           const GridField& field) {
    const Grid& g = field.grid();
    GridField out(g);
    const double nh = params.viscosity * params.h;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (!g.interior(k)) continue;
        out[k] = params.lambda * field[k] + hamiltonian_at(problem, g, k, gradient_at(field, k)) -
                 nh * laplacian_at(field, k);
    }
    return out;
}

GridField resolvent_map(const ControlProblem& problem, const SchemeParams& params,
                        const GridField& field, const PolicyField& policy) {
    const Grid& g = field.grid();
    check_same_grid(g, policy.grid());
    GridField out = field;
    const double inv_center = 1.0 / params.center();
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (!g.interior(k)) continue;
        const Vec& a = policy[k];
        const Vec f = drift_at(problem, g, k, a);
        out[k] = (running_cost_at(problem, g, k, a) + neighbour_sum(params, field, k, f)) * inv_center;
    }
    return out;
}

GridField resolvent_map(const ControlProblem& problem, const SchemeParams& params,
                        const GridField& field) {
    const Grid& g = field.grid();
    GridField out = field;
    const double inv_center = 1.0 / params.center();
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (!g.interior(k)) continue;
        const Vec a = greedy_policy(problem, g.point(k), gradient_at(field, k));
        const Vec f = drift_at(problem, g, k, a);
        out[k] = (running_cost_at(problem, g, k, a) + neighbour_sum(params, field, k, f)) * inv_center;
    }
    return out;
}

double contraction_factor(double lambda, int dim, double viscosity, double h) {
    if (!(lambda > 0.0) || !(viscosity > 0.0) || !(h > 0.0) || dim < 1)
        throw std::invalid_argument("contraction factor needs positive inputs");
    const double stencil = 2.0 * dim * viscosity / h;
    return stencil / (lambda + stencil);
}

std::string to_string(ViscosityMode mode) {
    switch (mode) {
        case ViscosityMode::theory: return "theory";
        case ViscosityMode::bench1d: return "bench1d";
        case ViscosityMode::bench2d: return "bench2d";
    }
    return "unknown";
}

ViscosityMode parse_viscosity_mode(const std::string& name) {
    if (name == "theory") return ViscosityMode::theory;
    if (name == "bench1d") return ViscosityMode::bench1d;
    if (name == "bench2d") return ViscosityMode::bench2d;
    throw std::invalid_argument("unknown viscosity mode '" + name + "'");
}

}  // namespace hjb
