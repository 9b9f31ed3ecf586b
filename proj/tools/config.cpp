#include <cmath>
#include <fstream>

#include "cli.hpp"

namespace slitqa::cli {

using namespace json_util;

namespace {

const std::vector<std::pair<Method, std::string>> method_names{
    {Method::exact, "exact"},
    {Method::magnus1, "magnus1"},
    {Method::magnus1_analytic, "magnus1_analytic"},
    {Method::magnus2, "magnus2"},
    {Method::ds_model, "ds_model"},
    {Method::ds_dephased, "ds_dephased"},
    {Method::redfield, "redfield"},
    {Method::lindblad_rwa, "lindblad_rwa"},
    {Method::rwa_closed_form, "rwa_closed_form"},
    {Method::semi_empirical, "semi_empirical"},
};

GridSpec grid_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    GridSpec g;
    g.min = number_or(j, "min", path, g.min);
    g.max = number_or(j, "max", path, g.max);
    const double count = number_or(j, "count", path, static_cast<double>(g.count));
    if (count < 2 || count != std::floor(count)) throw ConfigError(path + ".count", "must be an integer >= 2");
    g.count = static_cast<std::size_t>(count);
    const std::string spacing = string_or(j, "spacing", path, "linear");
    if (spacing == "log") g.log = true;
    else if (spacing != "linear") throw ConfigError(path + ".spacing", "expected linear or log");
    if (g.min < 0.0) throw ConfigError(path + ".min", "must be non-negative");
    if (!(g.max > g.min)) throw ConfigError(path + ".max", "must exceed min");
    if (g.log && !(g.min > 0.0)) throw ConfigError(path + ".min", "log spacing needs min > 0");
    return g;
}

// The bath block may list several temperatures; each yields its own sweep.
std::vector<bath::BathSpec> baths_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    auto it = j.find("temperature_mK");
    if (it == j.end() || !it->is_array()) return {bath::bath_spec_from_json(j, path)};
    if (it->empty()) throw ConfigError(path + ".temperature_mK", "must not be empty");
    std::vector<bath::BathSpec> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
        json one = j;
        one["temperature_mK"] = (*it)[i];
        try {
            out.push_back(bath::bath_spec_from_json(one, path));
        } catch (const ConfigError& e) {
            if (e.path() != path + ".temperature_mK") throw;
            throw ConfigError(e.path() + "[" + std::to_string(i) + "]", "must be a positive number");
        }
    }
    return out;
}

} // namespace

std::string to_string(Method m) {
    for (const auto& [k, v] : method_names)
        if (k == m) return v;
    return "unknown";
}

Method method_from_string(const std::string& name, const std::string& path) {
    for (const auto& [k, v] : method_names)
        if (v == name) return k;
    throw ConfigError(path, "unknown method '" + name + "'");
}

bool is_open_system(Method m) {
    return m == Method::redfield || m == Method::lindblad_rwa || m == Method::rwa_closed_form ||
           m == Method::semi_empirical;
}

std::vector<double> GridSpec::values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(count - 1);
        v[i] = log ? min * std::pow(max / min, u) : min + (max - min) * u;
    }
    v.back() = max;
    return v;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
}

RunConfig run_config_from_json(const json& j) {
    const std::string root = "config";
    if (!j.is_object()) throw ConfigError(root, "expected an object");
    RunConfig cfg;
    cfg.schedule = schedule::schedule_spec_from_json(require(j, "schedule", root), "schedule");
    cfg.E0 = number_or(j, "E0", root, cfg.E0);
    if (!(cfg.E0 > 0.0)) throw ConfigError("E0", "must be positive");
    const std::string conv = string_or(j, "frequency_convention", root, "angular");
    if (conv == "ordinary") cfg.convention = closed::FrequencyConvention::ordinary;
    else if (conv != "angular") throw ConfigError("frequency_convention", "expected angular or ordinary");
    if (j.contains("t_f")) cfg.grid = grid_from_json(j.at("t_f"), "t_f");

    const json& methods = require(j, "methods", root);
    if (!methods.is_array()) throw ConfigError("methods", "expected an array of method names");
    if (methods.empty()) throw ConfigError("methods", "must list at least one method");
    for (std::size_t i = 0; i < methods.size(); ++i) {
        const std::string p = "methods[" + std::to_string(i) + "]";
        if (!methods[i].is_string()) throw ConfigError(p, "expected a string");
        const Method m = method_from_string(methods[i].get<std::string>(), p);
        for (Method seen : cfg.methods)
            if (seen == m) throw ConfigError(p, "duplicate method");
        cfg.methods.push_back(m);
    }

    bool open = false, interferometer = false;
    for (Method m : cfg.methods) {
        open = open || is_open_system(m);
        interferometer = interferometer || m == Method::ds_model || m == Method::ds_dephased ||
                         m == Method::magnus1_analytic;
    }
    if (j.contains("bath")) {
        if (!open) throw ConfigError("bath", "given but no open-system method is selected");
        cfg.baths = baths_from_json(j.at("bath"), "bath");
    } else if (open) {
        throw ConfigError("bath", "required by the selected open-system methods");
    }
    if (open && !(cfg.grid.min > 0.0)) throw ConfigError("t_f.min", "open-system methods need t_f > 0");
    if (interferometer) {
        const bool two = cfg.schedule.form == "gaussian2" &&
                         (cfg.schedule.offsets.empty() ||
                          (cfg.schedule.offsets.size() == 2 && cfg.schedule.offsets[0] == -cfg.schedule.offsets[1]));
        if (!two) throw ConfigError("schedule", "two-step Gaussian methods need a symmetric two-pulse progression");
    }

    if (j.contains("gamma_deph")) {
        cfg.gamma_deph = number(j, "gamma_deph", root);
        if (*cfg.gamma_deph < 0.0) throw ConfigError("gamma_deph", "must be non-negative");
    }
    for (Method m : cfg.methods)
        if (m == Method::ds_dephased && !cfg.gamma_deph)
            throw ConfigError("gamma_deph", "required by ds_dephased");

    if (j.contains("options")) {
        const json& o = j.at("options");
        const std::string basis = string_or(o, "lindblad_basis", "options", "propagated");
        if (basis == "instantaneous") cfg.lindblad_basis = open::LindbladBasis::instantaneous;
        else if (basis != "propagated")
            throw ConfigError("options.lindblad_basis", "expected propagated or instantaneous");
        const double grid = number_or(o, "redfield_grid", "options", 4096.0);
        if (grid < 16 || grid != std::floor(grid))
            throw ConfigError("options.redfield_grid", "must be an integer >= 16");
        cfg.redfield_grid = static_cast<std::size_t>(grid);
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        cfg.output.path = string_or(o, "path", "output", cfg.output.path);
        cfg.output.format = string_or(o, "format", "output", cfg.output.format);
        cfg.output.report = string_or(o, "report", "output", "");
        if (cfg.output.format != "csv" && cfg.output.format != "json")
            throw ConfigError("output.format", "expected csv or json");
        if (cfg.output.path.empty()) throw ConfigError("output.path", "must not be empty");
    }
    return cfg;
}

SynthConfig synth_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config", "expected an object");
    SynthConfig cfg;
    cfg.schedule = schedule::schedule_spec_from_json(require(j, "schedule", "config"), "schedule");
    const double points = number_or(j, "points", "config", 1001.0);
    if (points < 2 || points != std::floor(points)) throw ConfigError("points", "must be an integer >= 2");
    cfg.points = static_cast<std::size_t>(points);
    cfg.output = string_or(j, "output", "config", cfg.output);
    return cfg;
}

} // namespace slitqa::cli
