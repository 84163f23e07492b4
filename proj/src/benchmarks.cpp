#include "hjb/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace hjb {

Benchmark make_lq1d(double lambda, double half_width, double h, double a_max) {
    Grid grid(half_width, h, 1);
    ControlProblem problem(
        1, lambda, a_max, [](const Vec&) { return Vec{}; },
        PointFunction([](const Vec& x) { return 0.5 * x[0] * x[0]; }));
    const SchemeParams params = make_scheme_params(problem, grid, ViscosityMode::bench1d);
    certify_monotone(problem, grid, params);

    auto exact = [lambda](const Vec& x) { return lq_reference_value(lambda, x[0]); };
    GridField reference = GridField::sample(grid, exact);
    GridField boundary = apply_dirichlet(GridField(grid), exact);

    const double p = lq_riccati_coefficient(lambda);
    if (p * half_width >= a_max)
        throw std::invalid_argument("LQ reference feedback saturates the control box");

    return Benchmark{"lq1d", grid, std::move(problem), params, std::move(boundary),
                     std::move(reference)};
}

Benchmark make_manufactured2d(double lambda, double half_width, double h, double a_max) {
    Grid grid(half_width, h, 2);
    auto drift = [](const Vec& z) { return manufactured_drift(z[0], z[1]); };

    // N only depends on the drift base and the box, so a provisional problem
    // with zero state cost is enough to evaluate the rule.
    const ControlProblem drift_only(2, lambda, a_max, drift, PointFunction([](const Vec&) { return 0.0; }));
    const SchemeParams params = make_scheme_params(drift_only, grid, ViscosityMode::bench2d);

    ControlProblem problem(2, lambda, a_max, drift,
                           manufactured_source(grid, lambda, params.viscosity));
    certify_monotone(problem, grid, params);

    auto exact = [](const Vec& z) { return manufactured_value(z[0], z[1]); };
    GridField reference = GridField::sample(grid, exact);
    GridField boundary = apply_dirichlet(GridField(grid), exact);

    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        if (!grid.interior(k)) continue;
        if (max_abs(gradient_at(reference, k)) >= a_max)
            throw std::invalid_argument("manufactured reference feedback saturates the control box");
    }

    return Benchmark{"manufactured2d", grid, std::move(problem), params, std::move(boundary),
                     std::move(reference)};
}

Benchmark make_benchmark(const std::string& name, double lambda, double half_width, double h,
                         double a_max) {
    if (name == "lq1d") return make_lq1d(lambda, half_width, h, a_max);
    if (name == "manufactured2d") return make_manufactured2d(lambda, half_width, h, a_max);
    throw std::invalid_argument("unknown benchmark '" + name + "'");
}

}  // namespace hjb
