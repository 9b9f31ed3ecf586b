#include "slitqa/schedule_io.hpp"

#include <cmath>

namespace slitqa {

namespace json_util {

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key, "missing required field");
    return *it;
}

double number(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path + "." + key, "must be finite");
    return x;
}

double number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return number(j, key, path);
}

std::vector<double> numbers(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_array()) throw ConfigError(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
            throw ConfigError(path + "." + key + "[" + std::to_string(i) + "]", "expected a finite number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::string string_or(const json& j, const std::string& key, const std::string& path,
                      const std::string& fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

} // namespace json_util

namespace schedule {

using json = nlohmann::json;
using namespace json_util;

namespace {

void check_grid(const std::vector<double>& s, const std::string& path) {
    if (s.size() < 16) throw ConfigError(path, "tabulated arrays need at least 16 samples");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1])) throw ConfigError(path + "[" + std::to_string(i) + "]", "s must be strictly increasing");
    if (std::abs(s.front()) > 1e-12 || std::abs(s.back() - 1.0) > 1e-12)
        throw ConfigError(path, "s must span [0, 1]");
}

GapSpec gap_from_json(const json& j, const std::string& path) {
    GapSpec g;
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    g.type = string_or(j, "type", path, "constant");
    if (g.type == "constant") {
        g.value = number_or(j, "value", path, 1.0);
        if (!(g.value > 0.0) || g.value > 1.0) throw ConfigError(path + ".value", "gap must lie in (0, 1]");
    } else if (g.type == "cos2") {
        g.depth = number_or(j, "depth", path, 0.99);
        g.floor = number_or(j, "floor", path, 0.01);
        g.cycles = number_or(j, "cycles", path, 2.0);
        if (!(g.floor > 0.0)) throw ConfigError(path + ".floor", "must be positive so the gap never closes");
        if (g.depth < 0.0 || g.depth + g.floor > 1.0 + 1e-12)
            throw ConfigError(path + ".depth", "need depth >= 0 and depth + floor <= 1");
    } else if (g.type == "tabulated") {
        g.s = numbers(j, "s", path);
        g.omega = numbers(j, "omega", path);
        check_grid(g.s, path + ".s");
        if (g.omega.size() != g.s.size()) throw ConfigError(path + ".omega", "length differs from s");
        for (std::size_t i = 0; i < g.omega.size(); ++i)
            if (!(g.omega[i] > 0.0) || g.omega[i] > 1.0)
                throw ConfigError(path + ".omega[" + std::to_string(i) + "]", "gap must lie in (0, 1]");
    } else {
        throw ConfigError(path + ".type", "unknown gap type '" + g.type + "'");
    }
    return g;
}

json gap_to_json(const GapSpec& g) {
    json j{{"type", g.type}};
    if (g.type == "constant") j["value"] = g.value;
    if (g.type == "cos2") {
        j["depth"] = g.depth;
        j["floor"] = g.floor;
        j["cycles"] = g.cycles;
    }
    if (g.type == "tabulated") {
        j["s"] = g.s;
        j["omega"] = g.omega;
    }
    return j;
}

} // namespace

ScheduleSpec schedule_spec_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    ScheduleSpec spec;
    spec.form = string_or(j, "form", path, "");
    if (spec.form == "linear") {
        return spec;
    }
    if (spec.form == "gaussian2") {
        spec.alpha = number(j, "alpha", path);
        if (!(spec.alpha > 0.0)) throw ConfigError(path + ".alpha", "must be positive");
        if (j.contains("offsets")) {
            spec.offsets = numbers(j, "offsets", path);
            if (spec.offsets.empty()) throw ConfigError(path + ".offsets", "must not be empty");
        } else {
            spec.mu = number(j, "mu", path);
            if (spec.mu < 0.0) throw ConfigError(path + ".mu", "must be non-negative");
        }
        spec.total_angle = number_or(j, "total_angle", path, pi / 2);
        const std::string norm = string_or(j, "normalization", path, "full_line");
        if (norm == "full_line") spec.normalization = Normalization::full_line;
        else if (norm == "finite_interval") spec.normalization = Normalization::finite_interval;
        else throw ConfigError(path + ".normalization", "expected full_line or finite_interval");
        spec.gap = j.contains("gap") ? gap_from_json(j.at("gap"), path + ".gap") : GapSpec{};
        return spec;
    }
    if (spec.form == "tabulated") {
        spec.s = numbers(j, "s", path);
        spec.A = numbers(j, "A", path);
        spec.B = numbers(j, "B", path);
        check_grid(spec.s, path + ".s");
        if (spec.A.size() != spec.s.size()) throw ConfigError(path + ".A", "length differs from s");
        if (spec.B.size() != spec.s.size()) throw ConfigError(path + ".B", "length differs from s");
        if (spec.A.front() < 0 || spec.B.front() < 0 || spec.A.back() < 0 || spec.B.back() < 0)
            throw ConfigError(path, "A and B must be non-negative at the end points");
        return spec;
    }
    throw ConfigError(path + ".form", "expected linear, gaussian2 or tabulated");
}

json to_json(const ScheduleSpec& spec) {
    json j{{"form", spec.form}};
    if (spec.form == "gaussian2") {
        j["alpha"] = spec.alpha;
        if (spec.offsets.empty()) j["mu"] = spec.mu;
        else j["offsets"] = spec.offsets;
        j["total_angle"] = spec.total_angle;
        j["normalization"] = spec.normalization == Normalization::full_line ? "full_line" : "finite_interval";
        j["gap"] = gap_to_json(spec.gap);
    } else if (spec.form == "tabulated") {
        j["s"] = spec.s;
        j["A"] = spec.A;
        j["B"] = spec.B;
    }
    return j;
}

GapProfile build_gap(const GapSpec& g) {
    if (g.type == "constant") return GapProfile::constant(g.value);
    if (g.type == "cos2") return GapProfile::two_crossing(g.depth, g.floor, g.cycles);
    if (g.type == "tabulated") return GapProfile::tabulated(g.s, g.omega);
    throw ConfigError("gap.type", "unknown gap type '" + g.type + "'");
}

BuiltSchedule build_schedule(const ScheduleSpec& spec, const ToleranceConfig& tol) {
    BuiltSchedule out;
    if (spec.form == "linear") {
        out.schedule = angular_from_cartesian(linear_schedule(), tol);
    } else if (spec.form == "tabulated") {
        CartesianSchedule c{Curve::tabulated(spec.s, spec.A), Curve::tabulated(spec.s, spec.B)};
        out.schedule = angular_from_cartesian(c, tol);
    } else if (spec.form == "gaussian2") {
        const GapProfile gap = build_gap(spec.gap);
        gap.validate();
        GaussianProgression g;
        g.alpha = spec.alpha;
        g.offsets = spec.offsets.empty() ? std::vector<double>{-spec.mu, spec.mu} : spec.offsets;
        g.total_angle = spec.total_angle;
        g.normalization = spec.normalization;
        g.tau_f = cumulative_gap(gap.omega, tol).tau_f;
        try {
            g.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("schedule", e.what());
        }
        out.warnings = g.warnings();
        out.schedule = synthesize_schedule(gap, gaussian_progression_fn(g), nullptr, tol, g.total_angle);
        out.gaussian = g;
    } else {
        throw ConfigError("schedule.form", "expected linear, gaussian2 or tabulated");
    }
    out.warnings.insert(out.warnings.end(), out.schedule.warnings.begin(), out.schedule.warnings.end());
    return out;
}

} // namespace schedule
} // namespace slitqa
