#pragma once

#include <span>
#include <variant>
#include <vector>

#include "hjb/grid.hpp"

namespace hjb {

/// Discounted control problem with affine-in-control dynamics
///   f(x, a) = b(x) + a,   c(x, a) = q(x) + |a|^2 / 2,
/// controls restricted componentwise to [-a_max, a_max]^d.
///
/// The state cost q is either a closed form or a grid function. A grid
/// function can only be evaluated at nodes of the grid it was sampled on.
class ControlProblem {
public:
    using StateCost = std::variant<PointFunction, GridField>;

    ControlProblem(int dim, double lambda, double a_max, VectorFunction drift_base,
                   StateCost state_cost);

    int dim() const noexcept { return dim_; }
    double lambda() const noexcept { return lambda_; }
    double a_max() const noexcept { return a_max_; }

    Vec drift_base(const Vec& x) const { return drift_base_(x); }

    /// Throws if the cost is a grid function and `x` is not one of its nodes.
    double state_cost(const Vec& x) const;
    double state_cost_at(const Grid& grid, std::size_t flat) const;

    bool in_box(const Vec& a, double slack = 1e-12) const noexcept;
    Vec clip(const Vec& a) const noexcept;

    /// Throws if b is non-finite at some node of `grid`; returns max |b_i| over nodes.
    double drift_base_sup(const Grid& grid) const;

    /// sup over nodes and controls of |c(x, a)|.
    double cost_sup(const Grid& grid) const;

private:
    int dim_;
    double lambda_;
    double a_max_;
    VectorFunction drift_base_;
    StateCost state_cost_;
};

/// Controls on the nodes of a grid. Boundary entries are unused and held at zero.
class PolicyField {
public:
    PolicyField(Grid grid, double a_max);

    const Grid& grid() const noexcept { return grid_; }
    double a_max() const noexcept { return a_max_; }
    std::size_t size() const noexcept { return controls_.size(); }

    const Vec& operator[](std::size_t flat) const noexcept { return controls_[flat]; }
    std::span<const Vec> controls() const noexcept { return controls_; }

    /// Rejects controls outside the box (1e-12 slack) and boundary nodes.
    void set(std::size_t flat, const Vec& a);

    double distance(const PolicyField& other) const;

private:
    Grid grid_;
    double a_max_;
    std::vector<Vec> controls_;
};

Vec dynamics(const ControlProblem& problem, const Vec& x, const Vec& a);
double running_cost(const ControlProblem& problem, const Vec& x, const Vec& a);

/// argmin over the box of |a|^2/2 + a.p, i.e. clip(-p). The drift base does
/// not enter because f is affine in a.
Vec greedy_policy(const ControlProblem& problem, const Vec& x, const Vec& p);

/// H(x, p) = sup_a { -c(x,a) - f(x,a).p }, evaluated at the greedy control.
double hamiltonian(const ControlProblem& problem, const Vec& x, const Vec& p);

// Node-based forms used by the scheme; avoid re-locating grid-function costs.
double running_cost_at(const ControlProblem& problem, const Grid& grid, std::size_t flat,
                       const Vec& a);
double hamiltonian_at(const ControlProblem& problem, const Grid& grid, std::size_t flat,
                      const Vec& p);

// --- 1D linear-quadratic benchmark: x' = a, c = (x^2 + a^2)/2 ----------------

/// Positive root of P^2 + lambda P - 1 = 0.
double lq_riccati_coefficient(double lambda);
/// V(x) = P x^2 / 2.
double lq_reference_value(double lambda, double x);
/// a*(x) = -P x, clipped to [-a_max, a_max].
double lq_reference_policy(double lambda, double x, double a_max);

// --- 2D manufactured benchmark ----------------------------------------------

Vec manufactured_drift(double x, double y);
double manufactured_value(double x, double y);

/// q_h = lambda V* - b.grad_h V* + |grad_h V*|^2/2 - N h lap_h V* at interior
/// nodes, zero on the boundary. V* samples are then an exact fixed point of
/// the scheme on this grid while the greedy control stays inside the box.
GridField manufactured_source(const Grid& grid, double lambda, double viscosity);

/// Finite-difference estimate of Lip_x(b) over the grid (max-norm).
double estimate_drift_lipschitz(const ControlProblem& problem, const Grid& grid);

}  // namespace hjb
