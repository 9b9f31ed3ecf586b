#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "cli.hpp"
#include "slitqa/bounds.hpp"

namespace slitqa::cli {

namespace {

struct Context {
    const RunConfig& cfg;
    schedule::BuiltSchedule built;
    std::optional<closed::InterferometerSpec> ds, ds_deph;
    std::optional<bath::OhmicBath> bath;
    double g{1.0};
};

Row closed_row(Method m, const closed::ClosedResult& r, double t_f) {
    Row row;
    row.t_f = t_f;
    row.method = to_string(m);
    row.p_ground = r.p00;
    row.trace_err = r.norm_error;
    if (!r.warnings.empty()) row.flags.push_back("warning");
    return row;
}

Row evaluate(const Context& ctx, Method m, double t_f) {
    const closed::ClosedRunSpec spec{ctx.built.schedule, ctx.cfg.E0, t_f, ctx.cfg.convention};
    switch (m) {
    case Method::exact: return closed_row(m, closed::solve_exact(spec), t_f);
    case Method::magnus1:
    case Method::magnus2: {
        const auto r = m == Method::magnus1 ? closed::magnus1(spec) : closed::magnus2_p00(spec);
        Row row = closed_row(m, r, t_f);
        const complex_t phi = closed::phi_integral(spec.schedule, spec.omega());
        if (!bounds::magnus_convergence_check(std::abs(phi)).pass()) row.flags.push_back("magnus_radius");
        return row;
    }
    case Method::magnus1_analytic: {
        Row row;
        row.t_f = t_f;
        row.method = to_string(m);
        row.p_ground = closed::two_step_p00(t_f, ctx.ds->t_ad, ctx.ds->t_coh);
        return row;
    }
    case Method::ds_model:
    case Method::ds_dephased: {
        Row row;
        row.t_f = t_f;
        row.method = to_string(m);
        row.p_ground = closed::interferometer_p00(m == Method::ds_model ? *ctx.ds : *ctx.ds_deph, t_f);
        return row;
    }
    default: break;
    }

    open::OpenRunSpec ospec{spec, *ctx.bath, ctx.g};
    open::OpenResult r;
    switch (m) {
    case Method::redfield: {
        open::RedfieldOptions opt;
        opt.grid = ctx.cfg.redfield_grid;
        r = open::solve_redfield(ospec, opt);
        break;
    }
    case Method::lindblad_rwa: {
        open::LindbladOptions opt;
        opt.basis = ctx.cfg.lindblad_basis;
        r = open::solve_lindblad_rwa(ospec, opt);
        break;
    }
    case Method::rwa_closed_form: ospec.method = open::OpenMethod::rwa_closed_form; r = open::solve_open(ospec); break;
    case Method::semi_empirical: ospec.method = open::OpenMethod::semi_empirical; r = open::solve_open(ospec); break;
    default: throw std::logic_error("unhandled method");
    }
    Row row;
    row.t_f = t_f;
    row.method = to_string(m);
    row.p_ground = r.p_ground;
    row.trace_err = r.trace_error;
    row.min_eig = r.min_eigenvalue;
    if (!r.tcl2.pass) row.flags.push_back("tcl2");
    if (r.trace_error > 1e-6 || r.hermiticity_error > 1e-6) row.flags.push_back("drift");
    if (r.min_eigenvalue < -1e-6) row.flags.push_back("positivity");
    return row;
}

json bath_block(const bath::BathSpec& spec, const bath::OhmicBath& b) {
    const auto ts = b.timescales();
    json j = bath::to_json(spec);
    j["beta_ns"] = b.beta();
    j["tau_B_ns"] = ts.tau_B;
    j["tau_M_ns"] = ts.tau_M;
    if (ts.transition_defined) j["tau_tr_ns"] = ts.tau_tr;
    return j;
}

} // namespace

SolverFailure::SolverFailure(const std::string& method, double t_f, const std::string& what)
    : std::runtime_error("solver failure in " + method + " at t_f = " + format_number(t_f) + ": " + what) {}

unsigned worker_count() {
    if (const char* env = std::getenv("SLITQA_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const RunConfig& cfg, const bath::BathSpec* bath_spec, unsigned workers) {
    Context ctx{cfg, schedule::build_schedule(cfg.schedule), {}, {}, {}, 1.0};
    bool open = false;
    for (Method m : cfg.methods) open = open || is_open_system(m);
    if (open && !bath_spec) throw ConfigError("bath", "required by the selected open-system methods");
    if (open) {
        ctx.bath = bath_spec->build();
        ctx.g = bath_spec->g;
    }
    const double E0a = closed::ClosedRunSpec{ctx.built.schedule, cfg.E0, 1.0, cfg.convention}.angular_E0();
    if (ctx.built.gaussian && ctx.built.gaussian->offsets.size() == 2) {
        ctx.ds = closed::make_interferometer(*ctx.built.gaussian, ctx.built.schedule, E0a, 0.0);
        ctx.ds_deph = closed::make_interferometer(*ctx.built.gaussian, ctx.built.schedule, E0a,
                                                  cfg.gamma_deph.value_or(0.0));
    }

    const std::vector<double> grid = cfg.grid.values();
    const std::size_t nm = cfg.methods.size();
    const std::size_t tasks = grid.size() * nm;
    SweepResult out;
    out.rows.resize(tasks);
    std::vector<std::string> errors(tasks);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < tasks; k = next++) {
            const double t_f = grid[k / nm];
            const Method m = cfg.methods[k % nm];
            try {
                out.rows[k] = evaluate(ctx, m, t_f);
            } catch (const std::exception& e) {
                errors[k] = e.what();
                if (errors[k].empty()) errors[k] = "unknown error";
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (std::size_t k = 0; k < tasks; ++k)
        if (!errors[k].empty()) throw SolverFailure(to_string(cfg.methods[k % nm]), grid[k / nm], errors[k]);

    for (Row& r : out.rows)
        if (!(r.p_ground >= -1e-6 && r.p_ground <= 1.0 + 1e-6)) r.flags.push_back("range");

    // validity report
    json& rep = out.report;
    rep["schedule"] = schedule::to_json(cfg.schedule);
    rep["E0"] = cfg.E0;
    rep["methods"] = json::array();
    for (Method m : cfg.methods) rep["methods"].push_back(to_string(m));
    rep["t_f"] = {{"min", cfg.grid.min}, {"max", cfg.grid.max}, {"count", cfg.grid.count},
                  {"spacing", cfg.grid.log ? "log" : "linear"}};
    rep["schedule_warnings"] = ctx.built.warnings;
    json bounds_list = json::array();
    if (ctx.built.gaussian)
        for (const auto& b : bounds::gaussian_bounds(*ctx.built.gaussian)) bounds_list.push_back(bounds::to_json(b));
    double phi_max = 0.0;
    for (double t_f : grid) {
        const closed::ClosedRunSpec spec{ctx.built.schedule, cfg.E0, t_f, cfg.convention};
        phi_max = std::max(phi_max, std::abs(closed::phi_integral(spec.schedule, spec.omega())));
    }
    bounds_list.push_back(bounds::to_json(bounds::magnus_convergence_check(phi_max)));
    if (open) {
        const double t_max = grid.back();
        bounds_list.push_back(bounds::to_json(bounds::tcl2_bound_report(*ctx.bath, ctx.g, t_max)));
        const auto rwa = bath::rwa_validity(*ctx.bath, ctx.built.schedule, t_max);
        rep["rwa_validity"] = {{"t_f", t_max},
                               {"inverse_tau_B", rwa.inverse_tau_B},
                               {"min_separation", rwa.min_separation},
                               {"fail_fraction", rwa.fail_fraction},
                               {"status", rwa.pass ? "pass" : "warn"}};
        rep["bath"] = bath_block(*bath_spec, *ctx.bath);
    }
    rep["bounds"] = bounds_list;
    std::size_t flagged = 0;
    for (const Row& r : out.rows) flagged += r.flags.empty() ? 0 : 1;
    rep["flagged_rows"] = flagged;
    return out;
}

} // namespace slitqa::cli
