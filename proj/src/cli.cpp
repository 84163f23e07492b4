#include "hjb/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "hjb/analysis.hpp"
#include "hjb/benchmarks.hpp"
#include "hjb/checks.hpp"
#include "hjb/policy_iteration.hpp"

namespace hjb::cli {

namespace {

using nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::string command;
    std::string benchmark;
    double lambda = 1.0;
    double half_width = 0.0;
    double h = 0.0;
    double a_max = 0.0;
    int iterations = 0;
    double theta = 1.0;
    std::string init = "zero";
    double omega = 1.7;
    double solver_tol = 1e-10;
    int solver_max_iter = 5000;
    double outer_tol = 0.0;  // 0: run every iteration
    std::string csv;
    std::string json_path;
    std::string slices_csv;
    double slice_x = 0.80;
    double slice_y = -0.80;
};

struct SweepOptions {
    std::string benchmark = "lq1d";
    std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
    double lambda = 1.0;
    double half_width = 0.0;  // 0: benchmark default
    double a_max = 0.0;       // 0: benchmark default
    double theta = 1.0;
    int max_iterations = 1000;
    double outer_tol = 1e-12;
    double omega = 1.7;
    double solver_tol = 1e-10;
    int solver_max_iter = 5000;
    std::string csv = "sweep.csv";
    std::string json_path = "sweep.json";
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");
    f << body;
    if (!f) throw ConfigError("failed writing '" + path + "'");
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

SorSettings solver_settings(double omega, double tol, int max_iter) {
    require(omega > 0.0 && omega < 2.0, "--omega must lie in (0, 2)");
    require(tol > 0.0, "--solver-tol must be positive");
    require(max_iter >= 1, "--solver-max-iter must be at least 1");
    return SorSettings{omega, tol, max_iter};
}

Benchmark build_benchmark(const std::string& name, double lambda, double half_width, double h,
                          double a_max) {
    require(lambda > 0.0, "--lambda must be positive");
    require(half_width > 0.0, "--half-width must be positive");
    require(h > 0.0, "--h must be positive");
    require(a_max > 0.0, "--a-max must be positive");
    return make_benchmark(name, lambda, half_width, h, a_max);
}

void warn_lipschitz(const Benchmark& bm, std::ostream& err) {
    const double lip = estimate_drift_lipschitz(bm.problem, bm.grid);
    if (bm.problem.lambda() <= lip)
        err << "warning: lambda = " << format_number(bm.problem.lambda())
            << " does not exceed the estimated drift Lipschitz constant " << format_number(lip) << "\n";
}

json run_config_json(const RunOptions& o) {
    json j{{"command", o.command},
                {"benchmark", o.benchmark},
                {"lambda", o.lambda},
                {"half_width", o.half_width},
                {"h", o.h},
                {"a_max", o.a_max},
                {"iterations", o.iterations},
                {"theta", o.theta},
                {"initial_policy", o.init},
                {"outer_tolerance", o.outer_tol > 0.0 ? json(o.outer_tol) : json(nullptr)},
                {"solver", {{"omega", o.omega}, {"tol", o.solver_tol}, {"max_iter", o.solver_max_iter}}},
                {"csv", o.csv},
                {"json", o.json_path}};
    if (!o.slices_csv.empty()) {
        j["slices_csv"] = o.slices_csv;
        j["slice_x"] = o.slice_x;
        j["slice_y"] = o.slice_y;
    }
    return j;
}

std::string trajectory_csv(const std::vector<IterationRecord>& records) {
    std::string s = "iter,linf_error,l2_error,residual_l2,monotonicity_violation\n";
    for (const auto& r : records) {
        s += std::to_string(r.iter) + "," + format_number(r.linf_error) + "," + format_number(r.l2_error) + "," +
             format_number(r.residual_l2) + "," + format_number(r.monotonicity_violation) + "\n";
    }
    return s;
}

std::string short_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Two profiles through the 2D field: V(x0, y) and V(x, y0).
std::string slices_csv(const Grid& grid, const std::vector<std::pair<std::string, GridField>>& series,
                       double x0, double y0) {
    const int ix = grid.node_of_coordinate(x0);
    const int iy = grid.node_of_coordinate(y0);
    require(ix >= 0, "--slice-x " + format_number(x0) + " is not a grid coordinate");
    require(iy >= 0, "--slice-y " + format_number(y0) + " is not a grid coordinate");
    std::string s = "slice,coordinate";
    for (const auto& [name, field] : series) s += "," + name;
    s += "\n";
    const int n = grid.nodes_per_axis();
    for (int pass = 0; pass < 2; ++pass) {
        for (int t = 0; t < n; ++t) {
            NodeIndex idx;
            idx.axis = pass == 0 ? std::array<int, 2>{ix, t} : std::array<int, 2>{t, iy};
            s += pass == 0 ? "x=" + short_label(grid.coordinate(ix)) : "y=" + short_label(grid.coordinate(iy));
            s += "," + format_number(grid.coordinate(t));
            for (const auto& [name, field] : series) s += "," + format_number(field.at(idx));
            s += "\n";
        }
    }
    return s;
}

int do_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
    require(o.iterations >= 1, "--iterations must be at least 1");
    require(o.theta > 0.0 && o.theta <= 1.0, "--theta must lie in (0, 1]");
    require(o.outer_tol >= 0.0, "--outer-tol must be nonnegative");
    require(!o.csv.empty() && !o.json_path.empty(), "output paths must be non-empty");

    const Benchmark bm = build_benchmark(o.benchmark, o.lambda, o.half_width, o.h, o.a_max);
    warn_lipschitz(bm, err);

    PIConfig cfg;
    cfg.max_outer_iterations = o.iterations;
    cfg.theta = o.theta;
    cfg.initial_policy = parse_initial_policy(o.init);
    if (o.outer_tol > 0.0) cfg.outer_tolerance = o.outer_tol;
    cfg.solver = solver_settings(o.omega, o.solver_tol, o.solver_max_iter);
    if (cfg.initial_policy == InitialPolicyKind::adversarial2d && bm.grid.dim() != 2)
        throw ConfigError("initial policy adversarial2d needs the 2D benchmark");

    std::vector<std::pair<std::string, GridField>> snapshots;
    const bool want_slices = !o.slices_csv.empty();
    auto observer = [&](int n, const GridField& v, const PolicyField&) {
        if (want_slices && (n == 0 || n == 5 || n == 15 || n == 30)) snapshots.emplace_back("V_" + std::to_string(n), v);
    };
    const PIReport report = run_policy_iteration(bm.problem, bm.params, bm.boundary, cfg,
                                                 bm.reference ? &*bm.reference : nullptr, observer);

    std::vector<double> linf;
    std::vector<double> residuals;
    double max_violation = 0.0;
    long sweeps = 0;
    for (const auto& r : report.records) {
        linf.push_back(r.linf_error);
        if (r.iter > 0) {
            residuals.push_back(r.residual_linf);
            max_violation = std::max(max_violation, r.monotonicity_violation);
        }
        sweeps += r.solve.iterations;
    }

    json result{{"iterations_performed", report.records.size()},
                {"stop_reason", to_string(report.stop)},
                {"initial_linf_error", number_or_null(linf.front())},
                {"final_linf_error", number_or_null(report.records.back().linf_error)},
                {"final_l2_error", number_or_null(report.records.back().l2_error)},
                {"final_residual_linf", number_or_null(report.records.back().residual_linf)},
                {"max_monotonicity_violation", max_violation},
                {"monotone_decrease_holds",
                 report.monotone_decrease_holds ? json(*report.monotone_decrease_holds) : json(nullptr)},
                {"linear_solver_iterations", sweeps}};
    try {
        const RateFit fit = fit_geometric_rate(residuals);
        result["measured_geometric_factor"] = std::exp(fit.slope);
    } catch (const std::exception&) {
        result["measured_geometric_factor"] = nullptr;
    }
    if (bm.reference) {
        const auto start = detect_plateau(linf, 10, 0.01);
        if (start) {
            double level = 0.0;
            for (std::size_t k = *start; k < linf.size(); ++k) level += linf[k];
            level /= static_cast<double>(linf.size() - *start);
            result["plateau"] = {{"start", *start}, {"level", level}};
        } else {
            result["plateau"] = nullptr;
        }
    }

    const double lip = estimate_drift_lipschitz(bm.problem, bm.grid);
    json summary{{"config", run_config_json(o)},
                 {"scheme",
                  {{"viscosity", bm.params.viscosity},
                   {"center", bm.params.center()},
                   {"contraction_factor", contraction_factor(bm.params.lambda, bm.params.dim, bm.params.viscosity, bm.params.h)},
                   {"drift_lipschitz_estimate", lip},
                   {"lambda_exceeds_lipschitz", bm.problem.lambda() > lip},
                   {"nodes", bm.grid.node_count()}}},
                 {"result", result}};

    write_file(o.csv, trajectory_csv(report.records));
    if (want_slices) {
        snapshots.emplace_back("V_final", report.final_value);
        if (bm.reference) snapshots.emplace_back("reference", *bm.reference);
        write_file(o.slices_csv, slices_csv(bm.grid, snapshots, o.slice_x, o.slice_y));
    }
    write_file(o.json_path, summary.dump(2) + "\n");

    out << o.command << ": " << report.records.size() << " iterations (" << to_string(report.stop)
        << "), final Linf error " << format_number(report.records.back().linf_error) << "\n";
    if (report.monotone_decrease_holds && !*report.monotone_decrease_holds) {
        err << "error: greedy iteration increased the value by " << format_number(max_violation) << "\n";
        return kCheckFailed;
    }
    return kOk;
}

struct SweepRow {
    double h = 0.0;
    int n_iterations = 0;
    long planned = 0;
    double linf = 0.0;
    double l2 = 0.0;
    double viscosity = 0.0;
    double cost_sup = 0.0;
};

int sweep_threads() {
    const char* env = std::getenv("HJB_PI_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    require(end && *end == '\0' && v >= 1 && v <= 1024, "HJB_PI_THREADS must be a positive integer");
    return static_cast<int>(v);
}

SweepRow sweep_one(const SweepOptions& o, double h, const SorSettings& solver) {
    const double default_l = o.benchmark == "lq1d" ? 3.0 : 2.0;
    const double default_a = o.benchmark == "lq1d" ? kLq1dControlBound : kManufactured2dControlBound;
    const Benchmark bm = build_benchmark(o.benchmark, o.lambda, o.half_width > 0.0 ? o.half_width : default_l, h,
                                         o.a_max > 0.0 ? o.a_max : default_a);
    SweepRow row;
    row.h = h;
    row.viscosity = bm.params.viscosity;
    row.cost_sup = bm.problem.cost_sup(bm.grid);
    row.planned = optimal_iteration_count(h, bm.params.lambda, bm.params.dim, bm.params.viscosity);
    PIConfig cfg;
    cfg.max_outer_iterations = static_cast<int>(std::min<long>(row.planned, o.max_iterations));
    cfg.theta = o.theta;
    cfg.initial_policy = bm.grid.dim() == 2 ? InitialPolicyKind::adversarial2d : InitialPolicyKind::zero;
    cfg.outer_tolerance = o.outer_tol;
    cfg.solver = solver;
    const PIReport r = run_policy_iteration(bm.problem, bm.params, bm.boundary, cfg, &*bm.reference);
    row.n_iterations = static_cast<int>(r.records.size());
    row.linf = r.records.back().linf_error;
    row.l2 = r.records.back().l2_error;
    return row;
}

int do_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    require(o.benchmark == "lq1d" || o.benchmark == "manufactured2d", "unknown benchmark '" + o.benchmark + "'");
    require(!o.hs.empty(), "--h needs at least one value");
    require(o.max_iterations >= 1, "--max-iterations must be at least 1");
    require(o.outer_tol > 0.0, "--outer-tol must be positive");
    require(o.theta > 0.0 && o.theta <= 1.0, "--theta must lie in (0, 1]");
    for (double h : o.hs) require(h > 0.0 && h < 1.0, "every --h value must lie in (0, 1)");
    const SorSettings solver = solver_settings(o.omega, o.solver_tol, o.solver_max_iter);
    const int threads = std::min<int>(sweep_threads(), static_cast<int>(o.hs.size()));

    std::vector<SweepRow> rows(o.hs.size());
    std::vector<std::exception_ptr> failures(o.hs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < o.hs.size(); k = next++) {
            try {
                rows[k] = sweep_one(o, o.hs[k], solver);
            } catch (...) {
                failures[k] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    std::string csv = "h,n_iterations,linf_error,l2_error\n";
    std::vector<double> hs;
    std::vector<double> errors;
    double c2 = 0.0;
    double c1 = 0.0;
    for (const auto& r : rows) {
        csv += format_number(r.h) + "," + std::to_string(r.n_iterations) + "," + format_number(r.linf) + "," +
               format_number(r.l2) + "\n";
        hs.push_back(r.h);
        errors.push_back(r.linf);
        c2 = std::max(c2, r.linf / std::sqrt(r.h));
        c1 = std::max(c1, iteration_error_constant(r.cost_sup, o.lambda));
    }

    json fit = nullptr;
    std::string fit_note;
    try {
        const RateFit f = fit_power_rate(hs, errors);
        fit = {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"points_used", f.points_used}};
    } catch (const std::exception& e) {
        fit_note = e.what();
    }

    json bounds = json::array();
    const int dim = o.benchmark == "lq1d" ? 1 : 2;
    for (const auto& r : rows) {
        const ErrorDecomposition d = total_error_bound(c1, c2, r.n_iterations, r.h, o.lambda, dim, r.viscosity);
        bounds.push_back({{"h", r.h},
                          {"n_iterations", r.n_iterations},
                          {"optimal_iteration_count", r.planned},
                          {"viscosity", r.viscosity},
                          {"iteration_term", d.iteration_term},
                          {"discretization_term", d.discretization_term},
                          {"bound", d.bound},
                          {"measured_linf_error", r.linf}});
    }

    json summary{{"config",
                  {{"command", "sweep"},
                   {"benchmark", o.benchmark},
                   {"h_values", o.hs},
                   {"lambda", o.lambda},
                   {"half_width", o.half_width > 0.0 ? json(o.half_width) : json(nullptr)},
                   {"a_max", o.a_max > 0.0 ? json(o.a_max) : json(nullptr)},
                   {"theta", o.theta},
                   {"max_iterations", o.max_iterations},
                   {"outer_tolerance", o.outer_tol},
                   {"solver", {{"omega", o.omega}, {"tol", o.solver_tol}, {"max_iter", o.solver_max_iter}}},
                   {"csv", o.csv},
                   {"json", o.json_path}}},
                 {"power_fit", fit},
                 {"c1", c1},
                 {"c2_fitted", c2},
                 {"c2_note", "fitted as max over the sweep of linf_error / sqrt(h)"},
                 {"total_error_bound", bounds}};
    if (!fit_note.empty()) summary["power_fit_error"] = fit_note;

    write_file(o.csv, csv);
    write_file(o.json_path, summary.dump(2) + "\n");
    out << "sweep: " << rows.size() << " mesh sizes";
    if (fit.is_object()) out << ", fitted order " << format_number(fit["slope"].get<double>());
    out << "\n";
    if (!fit_note.empty()) err << "note: no power fit (" << fit_note << ")\n";
    return kOk;
}

int do_check(const std::string& json_path, std::ostream& out) {
    const auto results = checks::run_all();
    json arr = json::array();
    bool all = true;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        all = all && r.passed;
    }
    if (!json_path.empty()) write_file(json_path, json{{"config", {{"command", "check"}}}, {"checks", arr}}.dump(2) + "\n");
    return all ? kOk : kCheckFailed;
}

RunOptions defaults_1d() {
    RunOptions o;
    o.command = "run1d";
    o.benchmark = "lq1d";
    o.half_width = 3.0;
    o.h = 0.03;
    o.a_max = kLq1dControlBound;
    o.iterations = 50;
    o.csv = "run1d.csv";
    o.json_path = "run1d.json";
    return o;
}

// 2D paper settings: relaxed update from the adversarial initial policy.
RunOptions defaults_2d() {
    RunOptions o;
    o.command = "run2d";
    o.benchmark = "manufactured2d";
    o.half_width = 2.0;
    o.h = 0.05;
    o.a_max = kManufactured2dControlBound;
    o.iterations = 60;
    o.theta = 0.18;
    o.init = "adversarial2d";
    o.csv = "run2d.csv";
    o.json_path = "run2d.json";
    o.slices_csv = "run2d_slices.csv";
    return o;
}

void add_run_options(CLI::App* sub, RunOptions& o) {
    sub->add_option("--lambda", o.lambda, "discount rate")->capture_default_str();
    sub->add_option("--half-width", o.half_width, "box half-width L")->capture_default_str();
    sub->add_option("--h", o.h, "mesh size")->capture_default_str();
    sub->add_option("--a-max", o.a_max, "control box half-width")->capture_default_str();
    sub->add_option("--iterations", o.iterations, "outer PI iterations")->capture_default_str();
    sub->add_option("--theta", o.theta, "relaxation weight in (0, 1]")->capture_default_str();
    sub->add_option("--init", o.init, "initial policy: zero | adversarial2d")->capture_default_str();
    sub->add_option("--omega", o.omega, "SOR relaxation factor")->capture_default_str();
    sub->add_option("--solver-tol", o.solver_tol, "SOR update tolerance")->capture_default_str();
    sub->add_option("--solver-max-iter", o.solver_max_iter, "SOR sweep limit")->capture_default_str();
    sub->add_option("--outer-tol", o.outer_tol, "stop once |V_n - V_{n-1}| <= tol (0 = never)")->capture_default_str();
    sub->add_option("--csv", o.csv, "per-iteration CSV path")->capture_default_str();
    sub->add_option("--json", o.json_path, "JSON summary path")->capture_default_str();
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

int execute_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Policy iteration for discounted HJB equations", "hjb-pi"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    RunOptions r1 = defaults_1d();
    auto* run1d = app.add_subcommand("run1d", "1D linear-quadratic benchmark");
    add_run_options(run1d, r1);

    RunOptions r2 = defaults_2d();
    auto* run2d = app.add_subcommand("run2d", "2D manufactured benchmark");
    add_run_options(run2d, r2);
    run2d->add_option("--slices-csv", r2.slices_csv, "slice profile CSV path")->capture_default_str();
    run2d->add_option("--slice-x", r2.slice_x, "x of the vertical slice")->capture_default_str();
    run2d->add_option("--slice-y", r2.slice_y, "y of the horizontal slice")->capture_default_str();

    SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "mesh-refinement sweep with converged PI per h");
    sweep->add_option("--benchmark", sw.benchmark, "lq1d | manufactured2d")->capture_default_str();
    sweep->add_option("--h", sw.hs, "comma-separated mesh sizes")->delimiter(',')->capture_default_str();
    sweep->add_option("--lambda", sw.lambda, "discount rate")->capture_default_str();
    sweep->add_option("--half-width", sw.half_width, "box half-width (0 = benchmark default)")->capture_default_str();
    sweep->add_option("--a-max", sw.a_max, "control bound (0 = benchmark default)")->capture_default_str();
    sweep->add_option("--theta", sw.theta, "relaxation weight in (0, 1]")->capture_default_str();
    sweep->add_option("--max-iterations", sw.max_iterations, "cap on the per-h iteration count")->capture_default_str();
    sweep->add_option("--outer-tol", sw.outer_tol, "outer stopping tolerance")->capture_default_str();
    sweep->add_option("--omega", sw.omega, "SOR relaxation factor")->capture_default_str();
    sweep->add_option("--solver-tol", sw.solver_tol, "SOR update tolerance")->capture_default_str();
    sweep->add_option("--solver-max-iter", sw.solver_max_iter, "SOR sweep limit")->capture_default_str();
    sweep->add_option("--csv", sw.csv, "sweep CSV path")->capture_default_str();
    sweep->add_option("--json", sw.json_path, "sweep JSON path")->capture_default_str();

    std::string check_json;
    auto* check = app.add_subcommand("check", "run the invariant and property suite");
    check->add_option("--json", check_json, "optional JSON report path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidConfig;
    }

    try {
        if (*run1d) return do_run(r1, out, err);
        if (*run2d) return do_run(r2, out, err);
        if (*sweep) return do_sweep(sw, out, err);
        return do_check(check_json, out);
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const MonotonicityError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kInvalidConfig;
    } catch (const ConfigError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kInvalidConfig;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kInvalidConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
}

}  // namespace hjb::cli
