#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace slitqa;
using namespace slitqa::cli;
namespace fs = std::filesystem;

namespace {

json fig1_config() {
    return json::parse(R"({
      "schedule": {"form": "gaussian2", "alpha": 32, "mu": 0.12625, "gap": {"type": "cos2"}},
      "E0": 0.25,
      "t_f": {"min": 1, "max": 400, "count": 400},
      "methods": ["exact", "magnus1_analytic"]
    })");
}

std::string config_error_path(const json& j) {
    try {
        run_config_from_json(j);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "";
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("slitqa_cli_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& name, const json& j) const {
        const auto p = path / name;
        std::ofstream(p) << j.dump();
        return p.string();
    }
};

int call(std::vector<std::string> args) {
    args.insert(args.begin(), "slitqa");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("run configuration parsing") {
    const auto cfg = run_config_from_json(fig1_config());
    CHECK(cfg.methods.size() == 2);
    CHECK(cfg.grid.count == 400);
    CHECK(cfg.baths.empty());
    CHECK(cfg.output.path == "results.csv");
    const auto grid = cfg.grid.values();
    CHECK(grid.front() == 1.0);
    CHECK(grid.back() == 400.0);
    CHECK(grid[1] == doctest::Approx(2.0));

    GridSpec lg{1.0, 100.0, 3, true};
    CHECK(lg.values()[1] == doctest::Approx(10.0));
}

TEST_CASE("configuration errors carry field paths") {
    auto j = fig1_config();
    j["methods"] = json::array();
    CHECK(config_error_path(j) == "methods");
    j["methods"] = {"exact", "nonsense"};
    CHECK(config_error_path(j) == "methods[1]");
    j["methods"] = {"exact", "exact"};
    CHECK(config_error_path(j) == "methods[1]");
    j["methods"] = {"lindblad_rwa"};
    CHECK(config_error_path(j) == "bath");
    j["bath"] = {{"eta_g2", 2e-4}, {"temperature_mK", {10, -20}}};
    CHECK(config_error_path(j) == "bath.temperature_mK[1]");
    j["bath"] = {{"eta_g2", 2e-4}, {"temperature_mK", {10, 20, 40}}};
    CHECK(run_config_from_json(j).baths.size() == 3);
    j["t_f"]["min"] = 0;
    CHECK(config_error_path(j) == "t_f.min");
    j = fig1_config();
    j["t_f"]["count"] = 1;
    CHECK(config_error_path(j) == "t_f.count");
    j = fig1_config();
    j["methods"] = {"ds_dephased"};
    CHECK(config_error_path(j) == "gamma_deph");
    j = fig1_config();
    j["schedule"] = {{"form", "linear"}};
    CHECK(config_error_path(j) == "schedule");
    j = fig1_config();
    j["schedule"]["gap"] = {{"type", "tabulated"}, {"s", {0, 1}}, {"omega", {1, 1}}};
    CHECK(config_error_path(j).rfind("schedule.gap", 0) == 0);
    j = fig1_config();
    j["output"] = {{"format", "xml"}};
    CHECK(config_error_path(j) == "output.format");
    j = fig1_config();
    j["options"] = {{"lindblad_basis", "other"}};
    CHECK(config_error_path(j) == "options.lindblad_basis");
}

TEST_CASE("CSV round trip and schema") {
    std::vector<Row> rows{{1.0, "exact", 0.5000001, 1e-15, 0.0, {}}, {2.5, "redfield", 0.75, 2e-9, -1e-7, {"tcl2", "drift"}}};
    std::ostringstream os;
    write_csv(os, rows);
    const std::string s = os.str();
    CHECK(s.rfind("t_f_ns,method,P_G,trace_err,min_eig,flags\n", 0) == 0);
    CHECK(s.find('\r') == std::string::npos);
    CHECK(s.find("2.5,redfield,0.75,2e-09,-1e-07,tcl2;drift\n") != std::string::npos);
    std::istringstream is(s);
    const auto back = read_csv(is);
    REQUIRE(back.size() == 2);
    CHECK(back[0].p_ground == 0.5000001);
    CHECK(back[1].flags.size() == 2);
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");

    std::istringstream bad("t_f_ns,method,P_G\n");
    CHECK_THROWS_AS(read_csv(bad), ConfigError);
}

TEST_CASE("extrema period and comparison") {
    std::vector<double> t, p;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(i);
        p.push_back(std::cos(2 * pi * i / 50.0));
    }
    std::size_t n = 0;
    CHECK(extrema_period(t, p, &n) == doctest::Approx(50.0));
    CHECK(n == 7);
    CHECK(extrema_period({0, 1, 2}, {0, 0, 0}) == 0.0);

    std::vector<Row> rows;
    for (std::size_t i = 0; i < t.size(); ++i) {
        rows.push_back({t[i], "a", p[i], 0, 0, {}});
        rows.push_back({t[i], "b", p[i] + 0.01 * (i % 2), 0, 0, {}});
    }
    const auto same = compare_methods(rows, "a", "a");
    CHECK(same.max_abs_dev == 0.0);
    CHECK(same.shared_points == 401);
    const auto ab = compare_methods(rows, "a", "b");
    CHECK(ab.max_abs_dev == doctest::Approx(0.01));
    CHECK(ab.mean_abs_dev == doctest::Approx(0.01 * 200 / 401.0));
    CHECK_THROWS_AS(compare_methods(rows, "a", "c"), ConfigError);
}

TEST_CASE("Fig-1 sweep reproduces the two-step oscillation") {
    const auto cfg = run_config_from_json(fig1_config());
    const auto res = run_sweep(cfg, nullptr, 2);
    REQUIRE(res.rows.size() == 800);
    CHECK(res.rows[0].method == "exact");
    CHECK(res.rows[1].method == "magnus1_analytic");
    const auto cmp = compare_methods(res.rows, "exact", "magnus1_analytic");
    CHECK(cmp.max_abs_dev <= 0.05);
    const double t_coh = pi / (0.12625 * 0.25);
    CHECK(std::abs(cmp.period_a / t_coh - 1.0) < 0.05);
    CHECK(std::abs(cmp.period_b / t_coh - 1.0) < 0.05);
    CHECK(res.report["bounds"].size() == 3);
    CHECK(res.report["flagged_rows"] == 0);
}

TEST_CASE("open-system sweep reports TCL2 and RWA diagnostics") {
    auto j = fig1_config();
    j["methods"] = {"lindblad_rwa", "semi_empirical"};
    j["bath"] = {{"eta_g2", 2e-4}, {"omega_c", 4.0}, {"temperature_mK", 20.0}};
    j["t_f"] = {{"min", 300}, {"max", 400}, {"count", 3}};
    const auto cfg = run_config_from_json(j);
    const auto res = run_sweep(cfg, &cfg.baths[0], 1);
    REQUIRE(res.rows.size() == 6);
    const auto& tcl2 = res.report["bounds"].back();
    CHECK(tcl2["name"] == "tcl2_validity");
    CHECK(tcl2["status"] == "warn");
    CHECK(res.report.contains("rwa_validity"));
    CHECK(res.rows.back().flags == std::vector<std::string>{"tcl2"});
    CHECK(res.rows[0].flags.empty());  // ratio 0.157 at 300 ns
    CHECK(res.rows[0].min_eig >= -1e-8);
}

TEST_CASE("subcommands, exit codes and determinism") {
    TempDir dir;
    auto j = fig1_config();
    j["t_f"]["count"] = 60;
    j["methods"] = {"exact", "magnus1", "magnus2", "ds_model"};
    j["output"] = {{"path", (dir.path / "out.csv").string()}};
    const std::string cfg = dir.write("run.json", j);

    ::setenv("SLITQA_WORKERS", "1", 1);
    CHECK(worker_count() == 1);
    CHECK(call({"run", cfg}) == 0);
    const std::string first = slurp(dir.path / "out.csv");
    const std::string report = slurp(dir.path / "out.report.json");
    ::setenv("SLITQA_WORKERS", "4", 1);
    CHECK(call({"run", cfg}) == 0);
    CHECK(slurp(dir.path / "out.csv") == first);
    CHECK(slurp(dir.path / "out.report.json") == report);
    ::unsetenv("SLITQA_WORKERS");

    CHECK(call({"compare", (dir.path / "out.csv").string(), "exact", "magnus1"}) == 0);
    CHECK(call({"compare", (dir.path / "out.csv").string(), "exact", "redfield"}) == 2);
    CHECK(call({"compare", (dir.path / "missing.csv").string(), "exact", "magnus1"}) == 2);

    j["methods"] = json::array();
    CHECK(call({"run", dir.write("empty.json", j)}) == 2);
    CHECK(call({"run", (dir.path / "nope.json").string()}) == 2);
    CHECK(call({"frobnicate"}) == 2);

    json synth = {{"schedule", {{"form", "gaussian2"}, {"alpha", 32}, {"mu", 0.12625}, {"gap", {{"type", "cos2"}}}}},
                  {"points", 11},
                  {"output", (dir.path / "sched.csv").string()}};
    CHECK(call({"synth", dir.write("synth.json", synth)}) == 0);
    std::istringstream table(slurp(dir.path / "sched.csv"));
    std::string line;
    std::getline(table, line);
    CHECK(line == "s,A,B,Omega,theta");
    std::getline(table, line);
    CHECK(line.rfind("0,1,0,1,0", 0) == 0);  // A(0) = Ω(0) = 1, B(0) = 0

    synth["schedule"]["gap"] = {{"type", "constant"}, {"value", -0.5}};
    CHECK(call({"synth", dir.write("bad.json", synth)}) == 2);
}

TEST_CASE("constant-gap synthesis follows the erf closed form") {
    SynthConfig cfg;
    cfg.schedule.form = "gaussian2";
    cfg.schedule.alpha = 32.0;
    cfg.schedule.mu = 0.2;
    cfg.points = 201;
    std::ostringstream os;
    write_schedule_table(os, cfg);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    const double a = 32.0, psi = pi / 2;
    double worst = 0.0;
    while (std::getline(is, line)) {
        std::vector<double> v;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) v.push_back(std::stod(c));
        const double s = v[0];
        double theta = 0.0;
        for (double c : {0.3, 0.7}) theta += psi / 4 * (std::erf(a * (s - c)) + std::erf(a * c));
        worst = std::max(worst, std::abs(v[4] - theta));
        CHECK(v[3] == 1.0);
    }
    CHECK(worst < 1e-6);
}
