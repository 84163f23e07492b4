#pragma once

#include <optional>
#include <string>

#include "hjb/control_problem.hpp"
#include "hjb/grid.hpp"
#include "hjb/scheme.hpp"

namespace hjb {

/// A fully configured problem instance: grid, dynamics/cost, certified scheme
/// parameters, Dirichlet data and (when known) the reference solution.
struct Benchmark {
    std::string name;
    Grid grid;
    ControlProblem problem;
    SchemeParams params;
    GridField boundary;  // Dirichlet data on boundary nodes, zero inside
    std::optional<GridField> reference;
};

inline constexpr double kLq1dControlBound = 6.0;
inline constexpr double kManufactured2dControlBound = 2.0;

/// x' = a, c = (x^2 + a^2)/2 on [-L, L] with exact Dirichlet data and the
/// closed-form value function as reference. N from the bench1d rule.
Benchmark make_lq1d(double lambda = 1.0, double half_width = 3.0, double h = 0.03,
                    double a_max = kLq1dControlBound);

/// z' = b(z) + a, c = q_h + |a|^2/2 on [-L, L]^2. q_h is manufactured so the
/// samples of V* solve the scheme exactly. N from the bench2d rule.
/// Throws if the reference feedback -grad_h V* saturates the control box.
Benchmark make_manufactured2d(double lambda = 1.0, double half_width = 2.0, double h = 0.05,
                              double a_max = kManufactured2dControlBound);

/// Looks up a benchmark by name ("lq1d" or "manufactured2d").
Benchmark make_benchmark(const std::string& name, double lambda, double half_width, double h,
                         double a_max);

}  // namespace hjb
