#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hjb/control_problem.hpp"
#include "hjb/grid.hpp"
#include "hjb/scheme.hpp"

namespace hjb {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row i: sub[i-1] x[i-1] + diag[i] x[i] + super[i] x[i+1] = rhs[i].
/// sub and super have n-1 entries.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    std::size_t size() const noexcept { return diag.size(); }
};

/// Five-point system on an nx-by-ny block of unknowns, row-major with axis 0
/// slowest. Neighbour coefficients that would reference a boundary node are
/// zero; their contribution has been moved into rhs.
struct StructuredSystem2D {
    int nx = 0;
    int ny = 0;
    std::vector<double> center;
    std::vector<double> x_minus;
    std::vector<double> x_plus;
    std::vector<double> y_minus;
    std::vector<double> y_plus;
    std::vector<double> rhs;

    std::size_t size() const noexcept { return center.size(); }
};

struct DenseSystem {
    std::size_t n = 0;
    std::vector<double> matrix;  // row-major n x n
    std::vector<double> rhs;
};

struct SolveStats {
    int iterations = 0;
    double final_update_norm = 0.0;
    bool converged = false;
};

struct SorSettings {
    double omega = 1.7;
    double tol = 1e-10;
    int max_iter = 5000;
};

struct SorResult {
    std::vector<double> solution;
    SolveStats stats;
};

using EvaluationSystem = std::variant<TridiagonalSystem, StructuredSystem2D>;

/// Linear system for L_a^h U = 0 on interior unknowns with the Dirichlet data
/// of `boundary`. Throws MonotonicityError on a positive off-diagonal.
EvaluationSystem assemble_evaluation_system(const ControlProblem& problem, const SchemeParams& params,
                                            const PolicyField& policy, const GridField& boundary);

/// Thomas algorithm. Throws SolverError on a zero pivot.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& system);

/// Lexicographic SOR; stops once the max-norm update of a sweep is <= tol.
/// `initial` may be empty (zero start). Non-convergence is reported, not thrown.
SorResult solve_sor(const StructuredSystem2D& system, const SorSettings& settings,
                    std::span<const double> initial = {});

/// Gaussian elimination with partial pivoting (test oracle, n <= 2500).
/// Throws SolverError on a singular matrix.
std::vector<double> solve_dense_oracle(DenseSystem system);

DenseSystem to_dense(const TridiagonalSystem& system);
DenseSystem to_dense(const StructuredSystem2D& system);

/// y = A x for the structured operator (used for residual certificates).
std::vector<double> multiply(const StructuredSystem2D& system, std::span<const double> x);

}  // namespace hjb
