#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "hjb/grid.hpp"

namespace hjb {

struct ErrorNorms {
    double linf;
    double l2;  // sqrt(h^d * sum diff^2)
};

/// Nodewise difference norms over all nodes, boundary included.
ErrorNorms error_metrics(const GridField& field, const GridField& reference);

/// Least-squares line through (x, log y).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
};

/// Fits log r_n = intercept + slope * n; exp(slope) is the per-iteration
/// factor. Entries <= 100 * epsilon are skipped (their index still counts).
RateFit fit_geometric_rate(std::span<const double> residuals);

/// Fits log e = intercept + slope * log h; slope is the observed order.
RateFit fit_power_rate(std::span<const double> h_values, std::span<const double> errors);

struct ErrorDecomposition {
    double iteration_term;       // C1 exp(-lambda n h / (2 d N))
    double discretization_term;  // C2 sqrt(h)
    double bound;
};

ErrorDecomposition total_error_bound(double c1, double c2, long n, double h, double lambda, int dim,
                                     double viscosity);

/// C1 = 2 |c|_inf / lambda.
double iteration_error_constant(double cost_sup, double lambda);

/// ceil(d N / (lambda h) * ln(1/h)); rejects h outside (0, 1).
long optimal_iteration_count(double h, double lambda, int dim, double viscosity);

/// Smallest index k such that every full window starting at or after k has
/// max/min <= 1 + rel_band. Empty when no window qualifies.
std::optional<std::size_t> detect_plateau(std::span<const double> errors, std::size_t window,
                                          double rel_band);

}  // namespace hjb
