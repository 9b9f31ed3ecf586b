#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace slitqa::cli {

namespace {

namespace fs = std::filesystem;

constexpr int exit_config = 2;
constexpr int exit_solver = 3;

std::string with_suffix(const std::string& path, const std::string& suffix, const std::string& ext = "") {
    const fs::path p(path);
    const std::string e = ext.empty() ? p.extension().string() : ext;
    return (p.parent_path() / (p.stem().string() + suffix + e)).string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(path, "cannot open for writing");
    return out;
}

int cmd_run(const std::string& config_path, const std::string& out_override, const std::string& report_override) {
    RunConfig cfg = run_config_from_json(read_json_file(config_path));
    if (!out_override.empty()) cfg.output.path = out_override;
    if (!report_override.empty()) cfg.output.report = report_override;
    const unsigned workers = worker_count();

    std::vector<const bath::BathSpec*> runs;
    for (const auto& b : cfg.baths) runs.push_back(&b);
    if (runs.empty()) runs.push_back(nullptr);
    for (const bath::BathSpec* b : runs) {
        std::string suffix;
        if (runs.size() > 1) suffix = "_T" + format_number(b->temperature_mK) + "mK";
        const SweepResult res = run_sweep(cfg, b, workers);
        const std::string path = with_suffix(cfg.output.path, suffix);
        auto out = open_out(path);
        if (cfg.output.format == "json") write_rows_json(out, res.rows);
        else write_csv(out, res.rows);
        const std::string report = cfg.output.report.empty() ? with_suffix(cfg.output.path, suffix, ".report.json")
                                                             : with_suffix(cfg.output.report, suffix);
        auto rep = open_out(report);
        rep << res.report.dump(2) << '\n';
        for (const auto& w : res.report["schedule_warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
        std::cerr << "wrote " << path << " (" << res.rows.size() << " rows) and " << report << '\n';
    }
    return 0;
}

int cmd_compare(const std::string& results, const std::string& a, const std::string& b) {
    std::ifstream in(results);
    if (!in) throw ConfigError(results, "cannot open file");
    const auto rows = read_csv(in);
    std::cout << to_json(compare_methods(rows, a, b)).dump(2) << '\n';
    return 0;
}

int cmd_synth(const std::string& config_path, const std::string& out_override) {
    SynthConfig cfg = synth_config_from_json(read_json_file(config_path));
    if (!out_override.empty()) cfg.output = out_override;
    auto out = open_out(cfg.output);
    for (const auto& w : write_schedule_table(out, cfg)) std::cerr << "warning: " << w << '\n';
    std::cerr << "wrote " << cfg.output << '\n';
    return 0;
}

} // namespace

int run_main(int argc, char** argv) {
    CLI::App app{"Two-level annealing sweeps: closed and open-system ground-state probabilities"};
    app.require_subcommand(1);

    std::string config, out, report, results, ma, mb;
    auto* run = app.add_subcommand("run", "Sweep t_f for the configured methods");
    run->add_option("config", config, "JSON run configuration")->required();
    run->add_option("-o,--output", out, "Override output.path");
    run->add_option("--report", report, "Override output.report");

    auto* cmp = app.add_subcommand("compare", "Deviation and oscillation period of two methods in a results CSV");
    cmp->add_option("results", results, "Results CSV")->required();
    cmp->add_option("method_a", ma)->required();
    cmp->add_option("method_b", mb)->required();

    auto* syn = app.add_subcommand("synth", "Tabulate a synthesized schedule");
    syn->add_option("config", config, "JSON schedule configuration")->required();
    syn->add_option("-o,--output", out, "Override output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*run) return cmd_run(config, out, report);
        if (*cmp) return cmd_compare(results, ma, mb);
        if (*syn) return cmd_synth(config, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const SolverFailure& e) {
        std::cerr << e.what() << '\n';
        return exit_solver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_solver;
    }
    return exit_config;
}

} // namespace slitqa::cli
