#include "hjb/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hjb {

namespace {

TridiagonalSystem assemble_1d(const ControlProblem& problem, const SchemeParams& params,
                              const PolicyField& policy, const GridField& boundary) {
    const Grid& g = boundary.grid();
    const std::size_t n = g.interior_count();
    TridiagonalSystem sys;
    sys.diag.resize(n);
    sys.rhs.resize(n);
    sys.sub.resize(n - 1);
    sys.super.resize(n - 1);

    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = j + 1;
        const Vec& a = policy[k];
        Vec f = problem.drift_base(g.point(k));
        f[0] += a[0];
        const StencilCoeffs s = stencil_coefficients(params, f);
        sys.diag[j] = s.center;
        sys.rhs[j] = running_cost_at(problem, g, k, a);
        if (j > 0)
            sys.sub[j - 1] = s.minus[0];
        else
            sys.rhs[j] -= s.minus[0] * boundary[k - 1];
        if (j + 1 < n)
            sys.super[j] = s.plus[0];
        else
            sys.rhs[j] -= s.plus[0] * boundary[k + 1];
    }
    return sys;
}

StructuredSystem2D assemble_2d(const ControlProblem& problem, const SchemeParams& params,
                               const PolicyField& policy, const GridField& boundary) {
    const Grid& g = boundary.grid();
    const int m = g.nodes_per_axis() - 2;
    const std::size_t n = g.interior_count();
    StructuredSystem2D sys;
    sys.nx = m;
    sys.ny = m;
    for (auto* v : {&sys.center, &sys.x_minus, &sys.x_plus, &sys.y_minus, &sys.y_plus, &sys.rhs})
        v->assign(n, 0.0);

    const std::size_t sx = g.stride(0);
    const std::size_t sy = g.stride(1);
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
            const std::size_t u = static_cast<std::size_t>(i - 1) * m + (j - 1);
            const std::size_t k = g.flat(NodeIndex{{i, j}});
            const Vec& a = policy[k];
            Vec f = problem.drift_base(g.point(k));
            f[0] += a[0];
            f[1] += a[1];
            const StencilCoeffs s = stencil_coefficients(params, f);
            sys.center[u] = s.center;
            double rhs = running_cost_at(problem, g, k, a);
            if (i > 1) sys.x_minus[u] = s.minus[0]; else rhs -= s.minus[0] * boundary[k - sx];
            if (i < m) sys.x_plus[u] = s.plus[0];   else rhs -= s.plus[0] * boundary[k + sx];
            if (j > 1) sys.y_minus[u] = s.minus[1]; else rhs -= s.minus[1] * boundary[k - sy];
            if (j < m) sys.y_plus[u] = s.plus[1];   else rhs -= s.plus[1] * boundary[k + sy];
            sys.rhs[u] = rhs;
        }
    }
    return sys;
}

}  // namespace

EvaluationSystem assemble_evaluation_system(const ControlProblem& problem, const SchemeParams& params,
                                            const PolicyField& policy, const GridField& boundary) {
    if (!(policy.grid() == boundary.grid()))
        throw std::invalid_argument("policy and boundary data live on different grids");
    if (boundary.grid().dim() == 1) return assemble_1d(problem, params, policy, boundary);
    return assemble_2d(problem, params, policy, boundary);
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& system) {
    const std::size_t n = system.size();
    if (n == 0) return {};
    if (system.rhs.size() != n || system.sub.size() + 1 != n || system.super.size() + 1 != n)
        throw std::invalid_argument("inconsistent tridiagonal system sizes");

    std::vector<double> c_prime(n, 0.0);
    std::vector<double> x(n);
    double pivot = system.diag[0];
    if (pivot == 0.0) throw SolverError("zero pivot in Thomas algorithm at row 0");
    if (n > 1) c_prime[0] = system.super[0] / pivot;
    x[0] = system.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = system.diag[i] - system.sub[i - 1] * c_prime[i - 1];
        if (pivot == 0.0) throw SolverError("zero pivot in Thomas algorithm at row " + std::to_string(i));
        if (i + 1 < n) c_prime[i] = system.super[i] / pivot;
        x[i] = (system.rhs[i] - system.sub[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime[i] * x[i + 1];
    return x;
}

SorResult solve_sor(const StructuredSystem2D& system, const SorSettings& settings,
                    std::span<const double> initial) {
    if (!(settings.omega > 0.0 && settings.omega < 2.0))
        throw std::invalid_argument("SOR relaxation must lie in (0, 2)");
    if (!(settings.tol > 0.0) || settings.max_iter < 1)
        throw std::invalid_argument("SOR tolerance and iteration cap must be positive");
    const std::size_t n = system.size();
    SorResult result;
    if (initial.empty())
        result.solution.assign(n, 0.0);
    else if (initial.size() == n)
        result.solution.assign(initial.begin(), initial.end());
    else
        throw std::invalid_argument("SOR initial guess has the wrong size");

    std::vector<double>& x = result.solution;
    const int nx = system.nx;
    const int ny = system.ny;
    const double omega = settings.omega;
    for (int sweep = 1; sweep <= settings.max_iter; ++sweep) {
        double update = 0.0;
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                const std::size_t u = static_cast<std::size_t>(i) * ny + j;
                double sigma = 0.0;
                if (i > 0) sigma += system.x_minus[u] * x[u - ny];
                if (i + 1 < nx) sigma += system.x_plus[u] * x[u + ny];
                if (j > 0) sigma += system.y_minus[u] * x[u - 1];
                if (j + 1 < ny) sigma += system.y_plus[u] * x[u + 1];
                const double gs = (system.rhs[u] - sigma) / system.center[u];
                const double delta = omega * (gs - x[u]);
                x[u] += delta;
                update = std::max(update, std::abs(delta));
            }
        }
        result.stats.iterations = sweep;
        result.stats.final_update_norm = update;
        if (!std::isfinite(update)) break;
        if (update <= settings.tol) {
            result.stats.converged = true;
            break;
        }
    }
    return result;
}

std::vector<double> solve_dense_oracle(DenseSystem system) {
    const std::size_t n = system.n;
    if (n > 2500) throw std::invalid_argument("dense oracle is limited to 2500 unknowns");
    if (system.matrix.size() != n * n || system.rhs.size() != n)
        throw std::invalid_argument("inconsistent dense system sizes");
    auto& a = system.matrix;
    auto& b = system.rhs;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) throw SolverError("singular matrix in dense oracle");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r * n + col] / a[col * n + col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
        x[r] = s / a[r * n + r];
    }
    return x;
}

DenseSystem to_dense(const TridiagonalSystem& system) {
    const std::size_t n = system.size();
    DenseSystem d{n, std::vector<double>(n * n, 0.0), system.rhs};
    for (std::size_t i = 0; i < n; ++i) {
        d.matrix[i * n + i] = system.diag[i];
        if (i > 0) d.matrix[i * n + i - 1] = system.sub[i - 1];
        if (i + 1 < n) d.matrix[i * n + i + 1] = system.super[i];
    }
    return d;
}

DenseSystem to_dense(const StructuredSystem2D& system) {
    const std::size_t n = system.size();
    const auto ny = static_cast<std::size_t>(system.ny);
    DenseSystem d{n, std::vector<double>(n * n, 0.0), system.rhs};
    for (int i = 0; i < system.nx; ++i) {
        for (int j = 0; j < system.ny; ++j) {
            const std::size_t u = static_cast<std::size_t>(i) * ny + j;
            d.matrix[u * n + u] = system.center[u];
            if (i > 0) d.matrix[u * n + u - ny] = system.x_minus[u];
            if (i + 1 < system.nx) d.matrix[u * n + u + ny] = system.x_plus[u];
            if (j > 0) d.matrix[u * n + u - 1] = system.y_minus[u];
            if (j + 1 < system.ny) d.matrix[u * n + u + 1] = system.y_plus[u];
        }
    }
    return d;
}

std::vector<double> multiply(const StructuredSystem2D& system, std::span<const double> x) {
    const std::size_t n = system.size();
    const auto ny = static_cast<std::size_t>(system.ny);
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < system.nx; ++i) {
        for (int j = 0; j < system.ny; ++j) {
            const std::size_t u = static_cast<std::size_t>(i) * ny + j;
            double s = system.center[u] * x[u];
            if (i > 0) s += system.x_minus[u] * x[u - ny];
            if (i + 1 < system.nx) s += system.x_plus[u] * x[u + ny];
            if (j > 0) s += system.y_minus[u] * x[u - 1];
            if (j + 1 < system.ny) s += system.y_plus[u] * x[u + 1];
            y[u] = s;
        }
    }
    return y;
}

}  // namespace hjb
