#include "hjb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hjb {

namespace {

RateFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("rate fit needs distinct abscissae");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    fit.points_used = static_cast<int>(x.size());
    return fit;
}

}  // namespace

ErrorNorms error_metrics(const GridField& field, const GridField& reference) {
    if (!(field.grid() == reference.grid()))
        throw std::invalid_argument("error metrics need fields on the same grid");
    const Grid& g = field.grid();
    double linf = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k) {
        const double d = field[k] - reference[k];
        linf = std::max(linf, std::abs(d));
        sum += d * d;
    }
    return {linf, std::sqrt(std::pow(g.h(), g.dim()) * sum)};
}

RateFit fit_geometric_rate(std::span<const double> residuals) {
    constexpr double floor = 100.0 * std::numeric_limits<double>::epsilon();
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t n = 0; n < residuals.size(); ++n) {
        if (!(residuals[n] > floor) || !std::isfinite(residuals[n])) continue;
        x.push_back(static_cast<double>(n));
        y.push_back(std::log(residuals[n]));
    }
    if (x.size() < 2) throw std::invalid_argument("geometric rate fit needs at least two usable points");
    return least_squares(x, y);
}

RateFit fit_power_rate(std::span<const double> h_values, std::span<const double> errors) {
    if (h_values.size() != errors.size()) throw std::invalid_argument("mesh sizes and errors differ in length");
    if (h_values.size() < 3) throw std::invalid_argument("power rate fit needs at least three mesh sizes");
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < h_values.size(); ++i) {
        if (i > 0 && !(h_values[i] < h_values[i - 1]))
            throw std::invalid_argument("mesh sizes must be strictly decreasing");
        if (!(h_values[i] > 0.0)) throw std::invalid_argument("mesh sizes must be positive");
        if (!(errors[i] > 0.0)) throw std::invalid_argument("power rate fit needs positive errors");
        x.push_back(std::log(h_values[i]));
        y.push_back(std::log(errors[i]));
    }
    return least_squares(x, y);
}

ErrorDecomposition total_error_bound(double c1, double c2, long n, double h, double lambda, int dim,
                                     double viscosity) {
    if (c1 < 0.0 || c2 < 0.0 || n < 0 || !(h > 0.0) || !(lambda > 0.0) || dim < 1 || !(viscosity > 0.0))
        throw std::invalid_argument("total error bound needs nonnegative constants and positive parameters");
    ErrorDecomposition e;
    e.iteration_term = c1 * std::exp(-lambda * static_cast<double>(n) * h / (2.0 * dim * viscosity));
    e.discretization_term = c2 * std::sqrt(h);
    e.bound = e.iteration_term + e.discretization_term;
    return e;
}

double iteration_error_constant(double cost_sup, double lambda) { return 2.0 * cost_sup / lambda; }

long optimal_iteration_count(double h, double lambda, int dim, double viscosity) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("optimal iteration count needs h in (0, 1)");
    if (!(lambda > 0.0) || !(viscosity > 0.0) || dim < 1)
        throw std::invalid_argument("optimal iteration count needs positive parameters");
    return static_cast<long>(std::ceil(dim * viscosity / (lambda * h) * std::log(1.0 / h)));
}

std::optional<std::size_t> detect_plateau(std::span<const double> errors, std::size_t window,
                                          double rel_band) {
    if (window < 2) throw std::invalid_argument("plateau window must be at least 2");
    if (errors.size() < window) return std::nullopt;

    auto flat = [&](std::size_t start) {
        const auto [lo, hi] = std::minmax_element(errors.begin() + start, errors.begin() + start + window);
        if (*hi == 0.0) return true;
        return *lo > 0.0 && *hi / *lo <= 1.0 + rel_band;
    };

    // Walk back from the last full window while every window stays flat.
    std::optional<std::size_t> found;
    for (std::size_t start = errors.size() - window + 1; start-- > 0;) {
        if (!flat(start)) break;
        found = start;
    }
    return found;
}

}  // namespace hjb
