#include "hjb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hjb {

namespace {

constexpr double kDivisibilityTol = 1e-9;

int checked_node_count(double half_width, double h) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("grid half-width must be positive and finite");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("grid mesh size must be positive and finite");
    const double intervals = 2.0 * half_width / h;
    const double rounded = std::round(intervals);
    if (std::abs(intervals - rounded) > kDivisibilityTol * std::max(1.0, rounded))
        throw std::invalid_argument("mesh size h=" + std::to_string(h) +
                                    " does not divide 2L=" + std::to_string(2.0 * half_width));
    if (rounded < 2.0)
        throw std::invalid_argument("grid needs at least one interior node");
    return static_cast<int>(rounded) + 1;
}

}  // namespace

Grid::Grid(double half_width, double h, int dim)
    : half_width_(half_width), h_(h), dim_(dim), nodes_per_axis_(0), node_count_(0) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("grid dimension must be 1 or 2, got " + std::to_string(dim));
    nodes_per_axis_ = checked_node_count(half_width, h);
    node_count_ = dim == 1 ? static_cast<std::size_t>(nodes_per_axis_)
                           : static_cast<std::size_t>(nodes_per_axis_) * nodes_per_axis_;
}

Grid build_grid(double half_width, double h, int dim) { return Grid(half_width, h, dim); }

std::size_t Grid::interior_count() const noexcept {
    const auto m = static_cast<std::size_t>(nodes_per_axis_ - 2);
    return dim_ == 1 ? m : m * m;
}

NodeIndex Grid::index(std::size_t flat) const noexcept {
    NodeIndex idx;
    if (dim_ == 1) {
        idx.axis[0] = static_cast<int>(flat);
    } else {
        idx.axis[0] = static_cast<int>(flat / nodes_per_axis_);
        idx.axis[1] = static_cast<int>(flat % nodes_per_axis_);
    }
    return idx;
}

std::size_t Grid::flat(NodeIndex index) const noexcept {
    if (dim_ == 1) return static_cast<std::size_t>(index.axis[0]);
    return static_cast<std::size_t>(index.axis[0]) * nodes_per_axis_ + index.axis[1];
}

std::size_t Grid::stride(int axis) const noexcept {
    if (dim_ == 1 || axis == 1) return 1;
    return static_cast<std::size_t>(nodes_per_axis_);
}

Vec Grid::point(NodeIndex index) const noexcept {
    Vec x{};
    for (int k = 0; k < dim_; ++k) x[k] = coordinate(index.axis[k]);
    return x;
}

Vec Grid::point(std::size_t flat) const noexcept { return point(index(flat)); }

bool Grid::interior(NodeIndex index) const noexcept {
    for (int k = 0; k < dim_; ++k)
        if (index.axis[k] < 1 || index.axis[k] > nodes_per_axis_ - 2) return false;
    return true;
}

int Grid::node_of_coordinate(double x) const noexcept {
    const double s = (x + half_width_) / h_;
    const double r = std::round(s);
    if (std::abs(s - r) > 1e-9 * std::max(1.0, r)) return -1;
    if (r < 0.0 || r > nodes_per_axis_ - 1) return -1;
    return static_cast<int>(r);
}

GridField::GridField(Grid grid, double fill) : grid_(grid), values_(grid.node_count(), fill) {
    if (!std::isfinite(fill)) throw std::invalid_argument("grid field fill value must be finite");
}

GridField::GridField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count())
        throw std::invalid_argument("grid field has " + std::to_string(values_.size()) +
                                    " values for " + std::to_string(grid_.node_count()) + " nodes");
    if (!all_finite()) throw std::invalid_argument("grid field contains non-finite values");
}

GridField GridField::sample(const Grid& grid, const PointFunction& fn) {
    std::vector<double> values(grid.node_count());
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = fn(grid.point(k));
    return GridField(grid, std::move(values));
}

bool GridField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double GridField::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridField::interior_sup_norm() const noexcept {
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (grid_.interior(k)) m = std::max(m, std::abs(values_[k]));
    return m;
}

double GridField::boundary_sup_norm() const noexcept {
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (!grid_.interior(k)) m = std::max(m, std::abs(values_[k]));
    return m;
}

Vec gradient_at(const GridField& field, std::size_t flat) noexcept {
    const Grid& g = field.grid();
    const double inv2h = 1.0 / (2.0 * g.h());
    Vec grad{};
    for (int i = 0; i < g.dim(); ++i) {
        const std::size_t s = g.stride(i);
        grad[i] = (field[flat + s] - field[flat - s]) * inv2h;
    }
    return grad;
}

double laplacian_at(const GridField& field, std::size_t flat) noexcept {
    const Grid& g = field.grid();
    const double inv_h2 = 1.0 / (g.h() * g.h());
    double lap = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        const std::size_t s = g.stride(i);
        lap += (field[flat + s] - 2.0 * field[flat] + field[flat - s]) * inv_h2;
    }
    return lap;
}

Vec discrete_gradient(const GridField& field, NodeIndex node) {
    if (!field.grid().interior(node))
        throw std::invalid_argument("discrete gradient is only defined at interior nodes");
    return gradient_at(field, field.grid().flat(node));
}

double discrete_laplacian(const GridField& field, NodeIndex node) {
    if (!field.grid().interior(node))
        throw std::invalid_argument("discrete Laplacian is only defined at interior nodes");
    return laplacian_at(field, field.grid().flat(node));
}

GridField apply_dirichlet(GridField field, const PointFunction& boundary_fn) {
    const Grid& g = field.grid();
    for (std::size_t k = 0; k < field.size(); ++k) {
        if (g.interior(k)) continue;
        const double v = boundary_fn(g.point(k));
        if (!std::isfinite(v))
            throw std::invalid_argument("boundary function is not finite on the boundary");
        field[k] = v;
    }
    return field;
}

std::vector<double> gather_interior(const GridField& field) {
    std::vector<double> out;
    out.reserve(field.grid().interior_count());
    for (std::size_t k = 0; k < field.size(); ++k)
        if (field.grid().interior(k)) out.push_back(field[k]);
    return out;
}

GridField scatter_interior(GridField boundary, std::span<const double> interior) {
    if (interior.size() != boundary.grid().interior_count())
        throw std::invalid_argument("interior vector size does not match the grid");
    std::size_t j = 0;
    for (std::size_t k = 0; k < boundary.size(); ++k)
        if (boundary.grid().interior(k)) boundary[k] = interior[j++];
    return boundary;
}

double max_abs(const Vec& v) noexcept {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace hjb
