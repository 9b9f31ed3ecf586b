#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "slitqa/bath_io.hpp"
#include "slitqa/closed.hpp"
#include "slitqa/open.hpp"
#include "slitqa/schedule_io.hpp"

namespace slitqa::cli {

using nlohmann::json;

enum class Method {
    exact,
    magnus1,
    magnus1_analytic,
    magnus2,
    ds_model,
    ds_dephased,
    redfield,
    lindblad_rwa,
    rwa_closed_form,
    semi_empirical
};

std::string to_string(Method m);
Method method_from_string(const std::string& name, const std::string& path);
bool is_open_system(Method m);

struct GridSpec {
    double min{1.0}, max{400.0};
    std::size_t count{400};
    bool log{false};

    std::vector<double> values() const;
};

struct OutputSpec {
    std::string path{"results.csv"};
    std::string format{"csv"};  // csv | json
    std::string report;         // empty: <path stem>.report.json
};

struct RunConfig {
    schedule::ScheduleSpec schedule;
    double E0{0.25};
    closed::FrequencyConvention convention{closed::FrequencyConvention::angular};
    GridSpec grid;
    std::vector<Method> methods;
    std::vector<bath::BathSpec> baths;  // one per listed temperature; empty for closed-only runs
    std::optional<double> gamma_deph;
    open::LindbladBasis lindblad_basis{open::LindbladBasis::propagated};
    std::size_t redfield_grid{4096};
    OutputSpec output;
};

/// Throws ConfigError carrying the JSON path of the first offending field.
RunConfig run_config_from_json(const json& j);
json read_json_file(const std::string& path);

struct Row {
    double t_f{0.0};
    std::string method;
    double p_ground{0.0};
    double trace_err{0.0};
    double min_eig{0.0};
    std::vector<std::string> flags;
};

struct SweepResult {
    std::vector<Row> rows;  // t_f-major, methods in configuration order
    json report;
};

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& method, double t_f, const std::string& what);
};

/// SLITQA_WORKERS when set to a positive integer, otherwise the hardware concurrency.
unsigned worker_count();

/// Runs every (t_f, method) pair; `bath` is required iff an open-system method is selected.
SweepResult run_sweep(const RunConfig& cfg, const bath::BathSpec* bath, unsigned workers);

std::string format_number(double x);  // %.12g
void write_csv(std::ostream& os, const std::vector<Row>& rows);
void write_rows_json(std::ostream& os, const std::vector<Row>& rows);
std::vector<Row> read_csv(std::istream& is);

/// Mean spacing between consecutive local maxima of p(t); 0 when fewer than two maxima.
double extrema_period(const std::vector<double>& t, const std::vector<double>& p, std::size_t* count = nullptr);

struct CompareSummary {
    std::string method_a, method_b;
    std::size_t shared_points{0};
    double max_abs_dev{0.0};
    double mean_abs_dev{0.0};
    double period_a{0.0}, period_b{0.0};
    std::size_t maxima_a{0}, maxima_b{0};
};
CompareSummary compare_methods(const std::vector<Row>& rows, const std::string& a, const std::string& b);
json to_json(const CompareSummary& s);

struct SynthConfig {
    schedule::ScheduleSpec schedule;
    std::size_t points{1001};
    std::string output{"schedule.csv"};
};
SynthConfig synth_config_from_json(const json& j);
/// Writes s, A, B, Omega, theta; returns synthesis warnings.
std::vector<std::string> write_schedule_table(std::ostream& os, const SynthConfig& cfg);

/// Entry point shared by the binary and the tests; returns the process exit code.
int run_main(int argc, char** argv);

} // namespace slitqa::cli
