#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "slitqa/schedule.hpp"

namespace slitqa {

/// Invalid configuration value; carries the JSON path of the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string path, const std::string& message)
        : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

namespace json_util {
using json = nlohmann::json;
const json& require(const json& j, const std::string& key, const std::string& path);
double number(const json& j, const std::string& key, const std::string& path);
double number_or(const json& j, const std::string& key, const std::string& path, double fallback);
std::vector<double> numbers(const json& j, const std::string& key, const std::string& path);
std::string string_or(const json& j, const std::string& key, const std::string& path,
                      const std::string& fallback);
} // namespace json_util

} // namespace slitqa

namespace slitqa::schedule {

struct GapSpec {
    std::string type{"constant"};  // constant | cos2 | tabulated
    double value{1.0};
    double depth{0.99}, floor{0.01}, cycles{2.0};
    std::vector<double> s, omega;
};

/// Declarative schedule description mirroring the JSON document.
struct ScheduleSpec {
    std::string form{"linear"};  // linear | gaussian2 | tabulated
    double alpha{32.0};
    double mu{101.0 / 800.0};
    std::vector<double> offsets;  // overrides ±mu when non-empty
    double total_angle{pi / 2};
    Normalization normalization{Normalization::full_line};
    GapSpec gap;
    std::vector<double> s, A, B;
};

ScheduleSpec schedule_spec_from_json(const nlohmann::json& j, const std::string& path = "schedule");
nlohmann::json to_json(const ScheduleSpec& spec);

GapProfile build_gap(const GapSpec& g);

struct BuiltSchedule {
    AngularSchedule schedule;
    std::optional<GaussianProgression> gaussian;
    std::vector<std::string> warnings;
};

BuiltSchedule build_schedule(const ScheduleSpec& spec, const ToleranceConfig& tol = {});

} // namespace slitqa::schedule
