#include "hjb/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hjb::oracle {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

template <typename F>
double golden_section(F&& f, double lo, double hi, int iterations) {
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < iterations; ++it) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

double sample_at(int i, int samples, double a_max) {
    return samples == 1 ? 0.0 : -a_max + 2.0 * a_max * i / (samples - 1);
}

}  // namespace

ControlMin scan_box(const std::function<double(const Vec&)>& objective, int dim, double a_max,
                    int samples_per_axis) {
    if (samples_per_axis < 2) throw std::invalid_argument("control scan needs at least two samples per axis");
    ControlMin best{Vec{}, std::numeric_limits<double>::infinity()};
    const int outer = dim == 2 ? samples_per_axis : 1;
    for (int i = 0; i < samples_per_axis; ++i) {
        for (int j = 0; j < outer; ++j) {
            Vec a{sample_at(i, samples_per_axis, a_max), dim == 2 ? sample_at(j, samples_per_axis, a_max) : 0.0};
            const double v = objective(a);
            if (v < best.value) best = {a, v};
        }
    }
    return best;
}

ControlMin minimize_over_box(const std::function<double(const Vec&)>& objective, int dim,
                             double a_max, int samples_per_axis) {
    ControlMin best = scan_box(objective, dim, a_max, samples_per_axis);
    const double spacing = 2.0 * a_max / (samples_per_axis - 1);
    for (int pass = 0; pass < 2; ++pass) {
        for (int axis = 0; axis < dim; ++axis) {
            Vec a = best.argmin;
            const double lo = std::max(-a_max, a[axis] - spacing);
            const double hi = std::min(a_max, a[axis] + spacing);
            auto along = [&](double t) {
                Vec trial = a;
                trial[axis] = t;
                return objective(trial);
            };
            a[axis] = golden_section(along, lo, hi, 80);
            // Keep the bracket endpoints as candidates: the box constraint may be active.
            for (double t : {lo, hi, a[axis]}) {
                Vec trial = best.argmin;
                trial[axis] = t;
                const double v = objective(trial);
                if (v < best.value) best = {trial, v};
            }
        }
    }
    return best;
}

double scanned_policy_operator_max(const ControlProblem& problem, const SchemeParams& params,
                                   const GridField& field, std::size_t flat, int samples_per_axis) {
    const Grid& g = field.grid();
    const Vec x = g.point(flat);
    const Vec b = problem.drift_base(x);
    const double q = problem.state_cost_at(g, flat);
    const Vec p = gradient_at(field, flat);
    const double base = params.lambda * field[flat] - params.viscosity * params.h * laplacian_at(field, flat);
    // max_a L_a U = base - min_a { c(x,a) + f(x,a).p }
    auto objective = [&](const Vec& a) {
        double v = q + 0.5 * (a[0] * a[0] + a[1] * a[1]);
        for (int i = 0; i < g.dim(); ++i) v += (b[i] + a[i]) * p[i];
        return v;
    };
    return base - minimize_over_box(objective, g.dim(), problem.a_max(), samples_per_axis).value;
}

LqValueIteration lq_value_iteration(double lambda, double half_width, double h, double dt,
                                    double a_max, double fit_half_width, double tol, int max_iter) {
    const Grid grid(half_width, h, 1);
    const int n = grid.nodes_per_axis();
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = grid.coordinate(i);

    std::vector<double> v(n, 0.0);
    std::vector<double> next(n, 0.0);
    const double discount = std::exp(-lambda * dt);
    constexpr int kScan = 121;
    const double spacing = 2.0 * a_max / (kScan - 1);

    auto interpolate = [&](double y) {
        y = std::clamp(y, -half_width, half_width);
        double s = (y + half_width) / h;
        int i = std::min(static_cast<int>(s), n - 2);
        const double w = s - i;
        return (1.0 - w) * v[i] + w * v[i + 1];
    };

    LqValueIteration out;
    for (int it = 1; it <= max_iter; ++it) {
        double update = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = xs[i];
            auto cost = [&](double a) { return 0.5 * (x * x + a * a) * dt + discount * interpolate(x + a * dt); };
            double best_a = -a_max;
            double best = cost(best_a);
            for (int s = 1; s < kScan; ++s) {
                const double a = -a_max + s * spacing;
                const double c = cost(a);
                if (c < best) {
                    best = c;
                    best_a = a;
                }
            }
            const double lo = std::max(-a_max, best_a - spacing);
            const double hi = std::min(a_max, best_a + spacing);
            const double refined = golden_section(cost, lo, hi, 40);
            best = std::min(best, cost(refined));
            next[i] = best;
            update = std::max(update, std::abs(best - v[i]));
        }
        v.swap(next);
        out.iterations = it;
        out.final_update = update;
        if (update <= tol) break;
    }

    // Least squares V ~ c0 + c2 x^2 on |x| <= fit_half_width.
    double s0 = 0.0, s2 = 0.0, s4 = 0.0, t0 = 0.0, t2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = xs[i];
        if (std::abs(x) > fit_half_width + 1e-12) continue;
        const double x2 = x * x;
        s0 += 1.0;
        s2 += x2;
        s4 += x2 * x2;
        t0 += v[i];
        t2 += v[i] * x2;
    }
    const double det = s0 * s4 - s2 * s2;
    const double c2 = (s0 * t2 - s2 * t0) / det;
    out.fitted_p = 2.0 * c2;
    return out;
}

}  // namespace hjb::oracle
