#pragma once

#include <string>
#include <vector>

namespace hjb::checks {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Structural invariants of the grid operators, control problem, scheme,
/// solvers and PI driver, evaluated on the two benchmarks. Deterministic:
/// random fields come from fixed seeds.
std::vector<CheckResult> run_all();

}  // namespace hjb::checks
