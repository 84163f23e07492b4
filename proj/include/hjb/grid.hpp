#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hjb {

inline constexpr int kMaxDim = 2;

/// Small fixed-size vector used for coordinates, controls, drifts and
/// discrete gradients. Components past the grid dimension are kept at zero,
/// so norms over all components equal norms over the active ones.
using Vec = std::array<double, kMaxDim>;

/// Per-axis integer node index.
struct NodeIndex {
    std::array<int, kMaxDim> axis{};
};

/// Uniform Cartesian mesh on the box [-L, L]^d, d in {1, 2}.
///
/// Node coordinates are x_i = -L + i*h along every axis. Nodes are stored
/// row-major: axis 0 is the slowest-varying index.
class Grid {
public:
    /// Rejects dim outside {1,2}, nonpositive L or h, and pairs (L, h) for
    /// which 2L/h is not an integer to within 1e-9 relative.
    Grid(double half_width, double h, int dim);

    int dim() const noexcept { return dim_; }
    double half_width() const noexcept { return half_width_; }
    double h() const noexcept { return h_; }
    int nodes_per_axis() const noexcept { return nodes_per_axis_; }
    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t interior_count() const noexcept;

    double coordinate(int i) const noexcept { return -half_width_ + i * h_; }
    Vec point(std::size_t flat) const noexcept;
    Vec point(NodeIndex index) const noexcept;

    NodeIndex index(std::size_t flat) const noexcept;
    std::size_t flat(NodeIndex index) const noexcept;

    /// Flat offset between a node and its +h e_axis neighbour.
    std::size_t stride(int axis) const noexcept;

    bool interior(NodeIndex index) const noexcept;
    bool interior(std::size_t flat) const noexcept { return interior(index(flat)); }

    /// Index of the node whose coordinate equals `x` along one axis, or -1.
    int node_of_coordinate(double x) const noexcept;

    bool operator==(const Grid&) const = default;

private:
    double half_width_;
    double h_;
    int dim_;
    int nodes_per_axis_;
    std::size_t node_count_;
};

Grid build_grid(double half_width, double h, int dim);

using PointFunction = std::function<double(const Vec&)>;
using VectorFunction = std::function<Vec(const Vec&)>;

/// Scalar values on every node of a grid, boundary included.
class GridField {
public:
    explicit GridField(Grid grid, double fill = 0.0);
    /// Rejects size mismatches and non-finite values.
    GridField(Grid grid, std::vector<double> values);

    static GridField sample(const Grid& grid, const PointFunction& fn);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double operator[](std::size_t flat) const noexcept { return values_[flat]; }
    double& operator[](std::size_t flat) noexcept { return values_[flat]; }
    double at(NodeIndex index) const noexcept { return values_[grid_.flat(index)]; }

    bool all_finite() const noexcept;
    double sup_norm() const noexcept;
    double interior_sup_norm() const noexcept;
    double boundary_sup_norm() const noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Centered gradient (phi(x+h e_i) - phi(x-h e_i)) / 2h. Rejects boundary nodes.
Vec discrete_gradient(const GridField& field, NodeIndex node);

/// Sum over axes of (phi(x+h e_i) - 2 phi(x) + phi(x-h e_i)) / h^2.
/// Rejects boundary nodes.
double discrete_laplacian(const GridField& field, NodeIndex node);

// Unchecked flat-index forms for inner loops; `flat` must be interior.
Vec gradient_at(const GridField& field, std::size_t flat) noexcept;
double laplacian_at(const GridField& field, std::size_t flat) noexcept;

/// Copy of `field` with boundary nodes set to boundary_fn(x); interior untouched.
GridField apply_dirichlet(GridField field, const PointFunction& boundary_fn);

/// Copy of the interior values in flat order.
std::vector<double> gather_interior(const GridField& field);

/// `boundary` with its interior nodes replaced by `interior` (flat order).
GridField scatter_interior(GridField boundary, std::span<const double> interior);

double max_abs(const Vec& v) noexcept;

}  // namespace hjb
