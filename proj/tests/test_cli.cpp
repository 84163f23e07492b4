#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hjb/checks.hpp"
#include "hjb/cli.hpp"

using hjb::cli::execute_command;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int code = execute_command(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(hjb::cli::format_number(0.1) == "0.10000000000000001");
    CHECK(hjb::cli::format_number(std::nan("")) == "nan");
    CHECK(hjb::cli::format_number(2.0) == "2");
    CHECK(std::strtod(hjb::cli::format_number(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("run1d with defaults writes 50 rows and a summary") {
    REQUIRE(run({"run1d", "--csv", "cli_run1d.csv", "--json", "cli_run1d.json"}) == 0);
    const auto rows = lines(slurp("cli_run1d.csv"));
    REQUIRE(rows.size() == 51);
    CHECK(rows[0] == "iter,linf_error,l2_error,residual_l2,monotonicity_violation");
    CHECK(rows[1].rfind("0,", 0) == 0);
    CHECK(rows[1].find("nan") != std::string::npos);

    const auto j = nlohmann::json::parse(slurp("cli_run1d.json"));
    CHECK(j["config"]["lambda"] == 1.0);
    CHECK(j["config"]["half_width"] == 3.0);
    CHECK(j["config"]["h"] == 0.03);
    CHECK(j["config"]["iterations"] == 50);
    CHECK(j["config"]["theta"] == 1.0);
    CHECK(j["config"]["initial_policy"] == "zero");
    CHECK(j["scheme"]["viscosity"] == 3.0);
    CHECK(j["result"]["monotone_decrease_holds"] == true);
    CHECK(j["result"]["plateau"].is_object());
}

TEST_CASE("identical runs give byte-identical CSV") {
    REQUIRE(run({"run1d", "--csv", "cli_det_a.csv", "--json", "cli_det_a.json"}) == 0);
    REQUIRE(run({"run1d", "--csv", "cli_det_b.csv", "--json", "cli_det_b.json"}) == 0);
    CHECK(slurp("cli_det_a.csv") == slurp("cli_det_b.csv"));
    REQUIRE(run({"run2d", "--h", "0.2", "--iterations", "12", "--csv", "cli_det_c.csv", "--json", "cli_det_c.json",
                 "--slices-csv", "cli_det_c_s.csv"}) == 0);
    REQUIRE(run({"run2d", "--h", "0.2", "--iterations", "12", "--csv", "cli_det_d.csv", "--json", "cli_det_d.json",
                 "--slices-csv", "cli_det_d_s.csv"}) == 0);
    CHECK(slurp("cli_det_c.csv") == slurp("cli_det_d.csv"));
    CHECK(slurp("cli_det_c_s.csv") == slurp("cli_det_d_s.csv"));
}

TEST_CASE("run2d writes trajectory and slices") {
    REQUIRE(run({"run2d", "--h", "0.1", "--iterations", "40", "--csv", "cli_run2d.csv", "--json", "cli_run2d.json",
                 "--slices-csv", "cli_slices.csv"}) == 0);
    CHECK(lines(slurp("cli_run2d.csv")).size() == 41);
    const auto s = lines(slurp("cli_slices.csv"));
    CHECK(s[0] == "slice,coordinate,V_0,V_5,V_15,V_30,V_final,reference");
    CHECK(s.size() == 1 + 2 * 41);
    CHECK(s[1].rfind("x=0.8", 0) == 0);
    CHECK(s[42].rfind("y=-0.8", 0) == 0);
    const auto j = nlohmann::json::parse(slurp("cli_run2d.json"));
    CHECK(j["config"]["theta"] == 0.18);
    CHECK(j["config"]["initial_policy"] == "adversarial2d");
    CHECK(j["config"]["solver"]["omega"] == 1.7);
    CHECK(j["config"]["solver"]["tol"] == 1e-10);
    CHECK(j["config"]["solver"]["max_iter"] == 5000);
    CHECK(j["result"]["monotone_decrease_holds"].is_null());
    CHECK(j["result"]["final_linf_error"].get<double>() < j["result"]["initial_linf_error"].get<double>());
}

TEST_CASE("sweep writes one row per mesh size and a fitted slope") {
    REQUIRE(run({"sweep", "--h", "0.2,0.1,0.05,0.025", "--benchmark", "lq1d", "--csv", "cli_sweep.csv", "--json",
                 "cli_sweep.json"}) == 0);
    const auto rows = lines(slurp("cli_sweep.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "h,n_iterations,linf_error,l2_error");
    const auto j = nlohmann::json::parse(slurp("cli_sweep.json"));
    CHECK(j["power_fit"]["slope"].get<double>() >= 0.45);
    CHECK(j["total_error_bound"].size() == 4);
    CHECK(j["config"]["h_values"].size() == 4);
    CHECK(j["c1"].get<double>() == 45.0);

    // Threaded sweep gives the same file.
    setenv("HJB_PI_THREADS", "3", 1);
    REQUIRE(run({"sweep", "--csv", "cli_sweep_t.csv", "--json", "cli_sweep_t.json"}) == 0);
    unsetenv("HJB_PI_THREADS");
    CHECK(slurp("cli_sweep_t.csv") == slurp("cli_sweep.csv"));
}

TEST_CASE("invalid configurations exit with status 1") {
    CHECK(run({}) == 1);
    CHECK(run({"frobnicate"}) == 1);
    CHECK(run({"run1d", "--h", "0.07", "--csv", "cli_bad.csv", "--json", "cli_bad.json"}) == 1);
    CHECK(run({"run1d", "--theta", "0", "--csv", "cli_bad.csv", "--json", "cli_bad.json"}) == 1);
    CHECK(run({"run1d", "--lambda", "-1", "--csv", "cli_bad.csv", "--json", "cli_bad.json"}) == 1);
    CHECK(run({"run1d", "--init", "adversarial2d", "--csv", "cli_bad.csv", "--json", "cli_bad.json"}) == 1);
    CHECK(run({"run2d", "--omega", "2.5", "--csv", "cli_bad.csv", "--json", "cli_bad.json"}) == 1);
    CHECK(run({"run2d", "--h", "0.3", "--csv", "cli_bad.csv", "--json", "cli_bad.json"}) == 1);
    CHECK(run({"run2d", "--slice-x", "0.83", "--csv", "cli_bad.csv", "--json", "cli_bad.json", "--slices-csv", "cli_bad_s.csv"}) == 1);
    CHECK(run({"sweep", "--benchmark", "lq3d"}) == 1);
    CHECK(run({"sweep", "--h", "1.5,0.5,0.25"}) == 1);
    std::string help;
    CHECK(run({"--help"}, &help) == 0);
    CHECK(help.find("run1d") != std::string::npos);
}

TEST_CASE("solver failure exits with status 2") {
    std::string msg;
    CHECK(run({"run2d", "--h", "0.2", "--solver-max-iter", "2", "--csv", "cli_fail.csv", "--json", "cli_fail.json",
               "--slices-csv", ""}, &msg) == 2);
    CHECK(msg.find("SOR") != std::string::npos);
}

TEST_CASE("check command passes on a fresh build") {
    const auto results = hjb::checks::run_all();
    CHECK(results.size() >= 15);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
    std::string text;
    CHECK(run({"check", "--json", "cli_check.json"}, &text) == 0);
    CHECK(text.find("FAIL") == std::string::npos);
    CHECK(nlohmann::json::parse(slurp("cli_check.json"))["checks"].size() == results.size());
}
