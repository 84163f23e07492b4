#include "hjb/control_problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjb {

ControlProblem::ControlProblem(int dim, double lambda, double a_max, VectorFunction drift_base,
                               StateCost state_cost)
    : dim_(dim),
      lambda_(lambda),
      a_max_(a_max),
      drift_base_(std::move(drift_base)),
      state_cost_(std::move(state_cost)) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("control problem dimension must be 1 or 2");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("discount lambda must be positive");
    if (!(a_max > 0.0) || !std::isfinite(a_max))
        throw std::invalid_argument("control box half-width must be positive and finite");
    if (!drift_base_) throw std::invalid_argument("drift base is empty");
    if (const auto* fn = std::get_if<PointFunction>(&state_cost_); fn && !*fn)
        throw std::invalid_argument("state cost is empty");
    if (const auto* q = std::get_if<GridField>(&state_cost_); q && q->grid().dim() != dim)
        throw std::invalid_argument("state cost grid dimension does not match the problem");
}

double ControlProblem::state_cost(const Vec& x) const {
    if (const auto* fn = std::get_if<PointFunction>(&state_cost_)) return (*fn)(x);
    const auto& q = std::get<GridField>(state_cost_);
    NodeIndex idx;
    for (int k = 0; k < dim_; ++k) {
        idx.axis[k] = q.grid().node_of_coordinate(x[k]);
        if (idx.axis[k] < 0)
            throw std::invalid_argument("grid-function state cost evaluated off its grid");
    }
    return q.at(idx);
}

double ControlProblem::state_cost_at(const Grid& grid, std::size_t flat) const {
    if (const auto* fn = std::get_if<PointFunction>(&state_cost_)) return (*fn)(grid.point(flat));
    const auto& q = std::get<GridField>(state_cost_);
    if (!(q.grid() == grid))
        throw std::invalid_argument("grid-function state cost was sampled on a different grid");
    return q[flat];
}

bool ControlProblem::in_box(const Vec& a, double slack) const noexcept {
    for (int k = 0; k < dim_; ++k)
        if (std::abs(a[k]) > a_max_ + slack) return false;
    return true;
}

Vec ControlProblem::clip(const Vec& a) const noexcept {
    Vec out{};
    for (int k = 0; k < dim_; ++k) out[k] = std::clamp(a[k], -a_max_, a_max_);
    return out;
}

double ControlProblem::drift_base_sup(const Grid& grid) const {
    double m = 0.0;
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        const Vec b = drift_base_(grid.point(k));
        for (int i = 0; i < dim_; ++i) {
            if (!std::isfinite(b[i])) throw std::invalid_argument("drift base is not finite on the grid");
            m = std::max(m, std::abs(b[i]));
        }
    }
    return m;
}

double ControlProblem::cost_sup(const Grid& grid) const {
    // c = q + |a|^2/2 ranges over [q, q + d a_max^2/2] on the box.
    const double control_max = 0.5 * dim_ * a_max_ * a_max_;
    double m = 0.0;
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        const double q = state_cost_at(grid, k);
        m = std::max({m, std::abs(q), std::abs(q + control_max)});
    }
    return m;
}

PolicyField::PolicyField(Grid grid, double a_max)
    : grid_(grid), a_max_(a_max), controls_(grid.node_count(), Vec{}) {
    if (!(a_max > 0.0)) throw std::invalid_argument("control box half-width must be positive");
}

void PolicyField::set(std::size_t flat, const Vec& a) {
    if (!grid_.interior(flat)) throw std::invalid_argument("policies are defined on interior nodes only");
    for (int k = 0; k < grid_.dim(); ++k)
        if (!(std::abs(a[k]) <= a_max_ + 1e-12))
            throw std::invalid_argument("control outside the admissible box");
    controls_[flat] = a;
}

double PolicyField::distance(const PolicyField& other) const {
    if (!(grid_ == other.grid_)) throw std::invalid_argument("policies live on different grids");
    double m = 0.0;
    for (std::size_t k = 0; k < controls_.size(); ++k)
        for (int i = 0; i < grid_.dim(); ++i)
            m = std::max(m, std::abs(controls_[k][i] - other.controls_[k][i]));
    return m;
}

Vec dynamics(const ControlProblem& problem, const Vec& x, const Vec& a) {
    if (!problem.in_box(a)) throw std::invalid_argument("control outside the admissible box");
    Vec f = problem.drift_base(x);
    for (int k = 0; k < problem.dim(); ++k) f[k] += a[k];
    return f;
}

namespace {

double control_cost(const Vec& a) noexcept { return 0.5 * (a[0] * a[0] + a[1] * a[1]); }

double dot(const Vec& u, const Vec& v) noexcept { return u[0] * v[0] + u[1] * v[1]; }

}  // namespace

double running_cost(const ControlProblem& problem, const Vec& x, const Vec& a) {
    if (!problem.in_box(a)) throw std::invalid_argument("control outside the admissible box");
    return problem.state_cost(x) + control_cost(a);
}

double running_cost_at(const ControlProblem& problem, const Grid& grid, std::size_t flat,
                       const Vec& a) {
    return problem.state_cost_at(grid, flat) + control_cost(a);
}

Vec greedy_policy(const ControlProblem& problem, const Vec& /*x*/, const Vec& p) {
    return problem.clip(Vec{-p[0], -p[1]});
}

double hamiltonian(const ControlProblem& problem, const Vec& x, const Vec& p) {
    const Vec a = greedy_policy(problem, x, p);
    return -running_cost(problem, x, a) - dot(dynamics(problem, x, a), p);
}

double hamiltonian_at(const ControlProblem& problem, const Grid& grid, std::size_t flat,
                      const Vec& p) {
    const Vec x = grid.point(flat);
    const Vec a = greedy_policy(problem, x, p);
    Vec f = problem.drift_base(x);
    for (int k = 0; k < problem.dim(); ++k) f[k] += a[k];
    return -running_cost_at(problem, grid, flat, a) - dot(f, p);
}

double lq_riccati_coefficient(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("discount lambda must be positive");
    return 0.5 * (-lambda + std::sqrt(lambda * lambda + 4.0));
}

double lq_reference_value(double lambda, double x) {
    return 0.5 * lq_riccati_coefficient(lambda) * x * x;
}

double lq_reference_policy(double lambda, double x, double a_max) {
    return std::clamp(-lq_riccati_coefficient(lambda) * x, -a_max, a_max);
}

Vec manufactured_drift(double x, double y) {
    return {0.28 * std::sin(x) + 0.14 * std::tanh(0.80 * y) + 0.06 * std::cos(1.20 * x - 0.40 * y),
            -0.24 * std::sin(y) + 0.12 * std::tanh(0.70 * x) - 0.05 * std::sin(0.90 * x + 0.80 * y)};
}

double manufactured_value(double x, double y) {
    return 0.08 * (x * x + 1.40 * y * y) +
           0.11 * std::sin(1.30 * x + 0.20) * std::cos(0.70 * y - 0.10) +
           0.055 * std::tanh(0.90 * x * y) +
           0.045 * std::sin(0.60 * x * y + 0.35 * x - 0.25 * y) +
           0.035 * std::cos(1.70 * x - 0.40 * y) +
           0.025 * std::atan(0.80 * x - 1.10 * y) +
           0.020 * std::sin(2.20 * x) * std::sin(1.40 * y);
}

GridField manufactured_source(const Grid& grid, double lambda, double viscosity) {
    if (grid.dim() != 2) throw std::invalid_argument("manufactured source requires a 2D grid");
    const GridField v = GridField::sample(grid, [](const Vec& z) { return manufactured_value(z[0], z[1]); });
    GridField q(grid);
    const double nh = viscosity * grid.h();
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        if (!grid.interior(k)) continue;
        const Vec z = grid.point(k);
        const Vec b = manufactured_drift(z[0], z[1]);
        const Vec p = gradient_at(v, k);
        q[k] = lambda * v[k] - dot(b, p) + 0.5 * dot(p, p) - nh * laplacian_at(v, k);
    }
    return q;
}

double estimate_drift_lipschitz(const ControlProblem& problem, const Grid& grid) {
    double lip = 0.0;
    const double h = grid.h();
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        const NodeIndex idx = grid.index(k);
        const Vec b0 = problem.drift_base(grid.point(k));
        for (int axis = 0; axis < grid.dim(); ++axis) {
            if (idx.axis[axis] + 1 >= grid.nodes_per_axis()) continue;
            const Vec b1 = problem.drift_base(grid.point(k + grid.stride(axis)));
            Vec diff{};
            for (int i = 0; i < grid.dim(); ++i) diff[i] = b1[i] - b0[i];
            lip = std::max(lip, max_abs(diff) / h);
        }
    }
    return lip;
}

}  // namespace hjb
