#include <doctest.h>

#include <cmath>
#include <random>

#include "hjb/benchmarks.hpp"
#include "hjb/oracles.hpp"
#include "hjb/policy_iteration.hpp"
#include "hjb/scheme.hpp"

using namespace hjb;

namespace {

ControlProblem zero_cost_problem(int dim, double a_max, Vec drift) {
    return ControlProblem(dim, 1.0, a_max, [drift](const Vec&) { return drift; },
                          PointFunction([](const Vec&) { return 0.0; }));
}

GridField random_interior(const GridField& boundary, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> uni(-scale, scale);
    GridField f = boundary;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (f.grid().interior(k)) f[k] = uni(rng);
    return f;
}

}  // namespace

TEST_CASE("viscosity rules") {
    const Benchmark lq = make_lq1d();
    CHECK(viscosity_coefficient(lq.problem, lq.grid, ViscosityMode::bench1d) == 3.0);
    CHECK(lq.params.viscosity == 3.0);

    const Benchmark m = make_manufactured2d();
    const double bsup = m.problem.drift_base_sup(m.grid);
    CHECK(bsup <= 0.48);
    // Direct scan of the drift components over the nodes.
    double scan = 0.0;
    for (std::size_t k = 0; k < m.grid.node_count(); ++k) {
        const Vec x = m.grid.point(k);
        const Vec b = manufactured_drift(x[0], x[1]);
        scan = std::max({scan, std::abs(b[0]), std::abs(b[1])});
    }
    CHECK(bsup == scan);
    CHECK(m.params.viscosity == doctest::Approx(1.05 * 0.5 * (scan + 2.0)).epsilon(1e-15));
    CHECK(m.params.viscosity <= 1.302);

    const Grid g = build_grid(1.0, 0.1, 1);
    CHECK(viscosity_coefficient(zero_cost_problem(1, 1.0, Vec{}), g, ViscosityMode::theory) == 1.0);
    // |f| <= 0.5 + 4 at the box corner.
    CHECK(viscosity_coefficient(zero_cost_problem(1, 4.0, Vec{0.5, 0}), g, ViscosityMode::theory) == 2.25);
}

TEST_CASE("certification rejects a too-small viscosity") {
    const Grid g = build_grid(1.0, 0.1, 1);
    const ControlProblem p = zero_cost_problem(1, 4.0, Vec{});
    SchemeParams params{1.5, 0.1, 1, 1.0};
    CHECK_THROWS_AS(certify_monotone(p, g, params), MonotonicityError);
    params.viscosity = 2.0;
    CHECK_NOTHROW(certify_monotone(p, g, params));
}

TEST_CASE("stencil coefficients") {
    SUBCASE("hand example") {
        const StencilCoeffs s = stencil_coefficients(SchemeParams{1.0, 0.1, 1, 1.0}, Vec{0.5, 0});
        CHECK(s.center == doctest::Approx(21.0));
        CHECK(s.plus[0] == doctest::Approx(-12.5));
        CHECK(s.minus[0] == doctest::Approx(-7.5));
    }
    SUBCASE("zero drift is symmetric") {
        const StencilCoeffs s = stencil_coefficients(SchemeParams{1.3, 0.05, 2, 1.0}, Vec{0, 0});
        for (int i = 0; i < 2; ++i) {
            CHECK(s.plus[i] == doctest::Approx(-26.0));
            CHECK(s.minus[i] == s.plus[i]);
        }
    }
    SUBCASE("edge of monotonicity") {
        const StencilCoeffs s = stencil_coefficients(SchemeParams{1.0, 0.1, 1, 1.0}, Vec{2.0, 0});
        CHECK(s.minus[0] == 0.0);
        CHECK_THROWS_AS(stencil_coefficients(SchemeParams{1.0, 0.1, 1, 1.0}, Vec{2.01, 0}), MonotonicityError);
    }
}

TEST_CASE("stencils of both benchmarks are monotone with row sum lambda") {
    std::mt19937_64 rng(9);
    for (const Benchmark& bm : {make_lq1d(), make_manufactured2d()}) {
        std::uniform_real_distribution<double> ua(-bm.problem.a_max(), bm.problem.a_max());
        for (std::size_t k = 0; k < bm.grid.node_count(); k += 7) {
            if (!bm.grid.interior(k)) continue;
            const Vec a{ua(rng), bm.grid.dim() == 2 ? ua(rng) : 0.0};
            const StencilCoeffs s = stencil_coefficients(bm.params, dynamics(bm.problem, bm.grid.point(k), a));
            double row = s.center;
            for (int i = 0; i < bm.grid.dim(); ++i) {
                CHECK(s.plus[i] <= 0.0);
                CHECK(s.minus[i] <= 0.0);
                row += s.plus[i] + s.minus[i];
            }
            CHECK(std::abs(row - bm.params.lambda) <= 1e-12 * s.center);
        }
    }
}

TEST_CASE("policy operator") {
    const Grid g = build_grid(1.0, 0.25, 2);
    const ControlProblem p = zero_cost_problem(2, 1.0, Vec{0.3, -0.2});
    const SchemeParams params = make_scheme_params(p, g, ViscosityMode::theory);
    PolicyField pol(g, 1.0);
    SUBCASE("constant field without cost") {
        const GridField r = apply_policy_operator(p, params, pol, GridField(g, 2.0));
        for (std::size_t k = 0; k < g.node_count(); ++k) CHECK(r[k] == doctest::Approx(g.interior(k) ? 2.0 : 0.0));
    }
    SUBCASE("constant barrier is a supersolution") {
        const Benchmark bm = make_manufactured2d(1.0, 2.0, 0.1);
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> ua(-2.0, 2.0);
        PolicyField pr(bm.grid, 2.0);
        for (std::size_t k = 0; k < bm.grid.node_count(); ++k)
            if (bm.grid.interior(k)) pr.set(k, Vec{ua(rng), ua(rng)});
        const double m = bm.problem.cost_sup(bm.grid) / bm.problem.lambda();
        const GridField r = apply_policy_operator(bm.problem, bm.params, pr, GridField(bm.grid, m));
        for (std::size_t k = 0; k < bm.grid.node_count(); ++k) {
            if (!bm.grid.interior(k)) continue;
            const double c = running_cost_at(bm.problem, bm.grid, k, pr[k]);
            CHECK(std::abs(r[k] - (m - c)) <= 1e-11);
            CHECK(r[k] >= -1e-12);
        }
    }
    SUBCASE("vanishes on the evaluated policy value") {
        const Benchmark bm = make_manufactured2d(1.0, 2.0, 0.1);
        const PolicyField a0 = initial_policy(InitialPolicyKind::adversarial2d, bm.grid, bm.problem);
        const Evaluation e = policy_evaluate(bm.problem, bm.params, a0, bm.boundary, SorSettings{1.7, 1e-12, 5000});
        CHECK(apply_policy_operator(bm.problem, bm.params, a0, e.value).sup_norm() <= 1e-8);
    }
}

TEST_CASE("Bellman residual") {
    SUBCASE("manufactured samples are an exact fixed point") {
        const Benchmark bm = make_manufactured2d();
        CHECK(bellman_residual(bm.problem, bm.params, *bm.reference).sup_norm() <= 1e-11);
    }
    SUBCASE("constant field with pure control cost gives lambda K") {
        const Grid g = build_grid(1.0, 0.25, 2);
        const ControlProblem p(2, 0.7, 1.0, [](const Vec& x) { return Vec{std::sin(x[0]), x[1] * 0.2}; },
                               PointFunction([](const Vec&) { return 0.0; }));
        const SchemeParams params = make_scheme_params(p, g, ViscosityMode::theory);
        const GridField r = bellman_residual(p, params, GridField(g, 3.0));
        for (std::size_t k = 0; k < g.node_count(); ++k)
            if (g.interior(k)) CHECK(r[k] == doctest::Approx(2.1));
    }
    SUBCASE("agrees with a scan over controls") {
        const Benchmark bm = make_manufactured2d(1.0, 2.0, 0.2);
        std::mt19937_64 rng(17);
        for (int t = 0; t < 10; ++t) {
            const GridField u = random_interior(bm.boundary, rng, 0.5);
            const GridField f = bellman_residual(bm.problem, bm.params, u);
            for (std::size_t k = 0; k < u.size(); ++k)
                if (bm.grid.interior(k))
                    CHECK(std::abs(f[k] - oracle::scanned_policy_operator_max(bm.problem, bm.params, u, k, 32)) <= 1e-8);
        }
    }
}

TEST_CASE("resolvent map") {
    SUBCASE("constant field without cost scales by beta") {
        const Grid g = build_grid(1.0, 0.25, 2);
        const ControlProblem p = zero_cost_problem(2, 1.0, Vec{0.1, 0.4});
        const SchemeParams params = make_scheme_params(p, g, ViscosityMode::theory);
        const double beta = contraction_factor(1.0, 2, params.viscosity, 0.25);
        const PolicyField pol(g, 1.0);
        const GridField t = resolvent_map(p, params, GridField(g, 5.0), pol);
        for (std::size_t k = 0; k < g.node_count(); ++k) CHECK(t[k] == doctest::Approx(g.interior(k) ? beta * 5.0 : 5.0));
    }
    std::mt19937_64 rng(23);
    const Benchmark bm = make_lq1d(1.0, 3.0, 0.1);
    SUBCASE("F = D (U - T U)") {
        for (int t = 0; t < 10; ++t) {
            const GridField u = random_interior(bm.boundary, rng, 3.0);
            const GridField f = bellman_residual(bm.problem, bm.params, u);
            const GridField tu = resolvent_map(bm.problem, bm.params, u);
            for (std::size_t k = 0; k < u.size(); ++k)
                if (bm.grid.interior(k))
                    CHECK(std::abs(f[k] - bm.params.center() * (u[k] - tu[k])) <= 1e-12 * (1.0 + u.sup_norm()));
        }
    }
    SUBCASE("contraction and order preservation") {
        const double beta = contraction_factor(1.0, 1, bm.params.viscosity, bm.params.h);
        for (int t = 0; t < 10; ++t) {
            const GridField u = random_interior(bm.boundary, rng, 3.0);
            const GridField w = random_interior(bm.boundary, rng, 3.0);
            const GridField tu = resolvent_map(bm.problem, bm.params, u);
            const GridField tw = resolvent_map(bm.problem, bm.params, w);
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t k = 0; k < u.size(); ++k) {
                lhs = std::max(lhs, std::abs(tu[k] - tw[k]));
                rhs = std::max(rhs, std::abs(u[k] - w[k]));
            }
            CHECK(lhs <= beta * rhs + 1e-12);

            GridField up = u;
            for (std::size_t k = 0; k < up.size(); ++k) up[k] += 0.01 * (k % 5);
            const GridField tup = resolvent_map(bm.problem, bm.params, up);
            for (std::size_t k = 0; k < u.size(); ++k) CHECK(tu[k] <= tup[k] + 1e-14);
        }
    }
    SUBCASE("control-free map equals the map at the improved policy") {
        for (int t = 0; t < 5; ++t) {
            const GridField u = random_interior(bm.boundary, rng, 3.0);
            const PolicyField next = policy_improve(bm.problem, u, PolicyField(bm.grid, bm.problem.a_max()), 1.0);
            const GridField a = resolvent_map(bm.problem, bm.params, u);
            const GridField b = resolvent_map(bm.problem, bm.params, u, next);
            for (std::size_t k = 0; k < u.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12 * (1.0 + std::abs(a[k])));
        }
    }
    SUBCASE("fixed point of F is a fixed point of T") {
        const Benchmark m = make_manufactured2d(1.0, 2.0, 0.1);
        const GridField t = resolvent_map(m.problem, m.params, *m.reference);
        double gap = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) gap = std::max(gap, std::abs(t[k] - (*m.reference)[k]));
        CHECK(gap <= 1e-11 / m.params.center());
    }
}

TEST_CASE("barrier ordering") {
    for (const Benchmark& bm : {make_lq1d(), make_manufactured2d()}) {
        const double m = bm.problem.cost_sup(bm.grid) / bm.problem.lambda();
        const GridField up = bellman_residual(bm.problem, bm.params, GridField(bm.grid, m));
        const GridField lo = bellman_residual(bm.problem, bm.params, GridField(bm.grid, -m));
        for (std::size_t k = 0; k < up.size(); ++k) {
            CHECK(up[k] >= 0.0);
            CHECK(lo[k] <= 0.0);
        }
    }
}

TEST_CASE("contraction factor") {
    CHECK(contraction_factor(1.0, 1, 1.0, 0.03) == doctest::Approx(0.985222).epsilon(1e-6));
    CHECK(contraction_factor(40.0, 2, 1.0, 0.1) == doctest::Approx(0.5));
    double prev = 0.0;
    for (double h : {0.5, 0.2, 0.1, 0.05, 0.01}) {
        const double b = contraction_factor(1.0, 2, 1.3, h);
        CHECK(b > prev);
        CHECK(b < 1.0);
        prev = b;
    }
    CHECK_THROWS(contraction_factor(0.0, 1, 1.0, 0.1));
}

TEST_CASE("viscosity mode names round-trip") {
    for (auto m : {ViscosityMode::theory, ViscosityMode::bench1d, ViscosityMode::bench2d})
        CHECK(parse_viscosity_mode(to_string(m)) == m);
    CHECK_THROWS(parse_viscosity_mode("upwind"));
}
