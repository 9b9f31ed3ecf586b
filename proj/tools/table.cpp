#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "cli.hpp"

namespace slitqa::cli {

namespace {

const char* const header = "t_f_ns,method,P_G,trace_err,min_eig,flags";

std::string join_flags(const std::vector<std::string>& flags) {
    std::string s;
    for (const auto& f : flags) s += (s.empty() ? "" : ";") + f;
    return s;
}

double parse_number(const std::string& field, std::size_t line, const char* column) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size())
        throw ConfigError("results[" + std::to_string(line) + "]." + column, "expected a number");
    return x;
}

} // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
    os << header << '\n';
    for (const Row& r : rows) {
        os << format_number(r.t_f) << ',' << r.method << ',' << format_number(r.p_ground) << ','
           << format_number(r.trace_err) << ',' << format_number(r.min_eig) << ',' << join_flags(r.flags) << '\n';
    }
}

void write_rows_json(std::ostream& os, const std::vector<Row>& rows) {
    json arr = json::array();
    for (const Row& r : rows) {
        arr.push_back({{"t_f_ns", r.t_f},
                       {"method", r.method},
                       {"P_G", r.p_ground},
                       {"trace_err", r.trace_err},
                       {"min_eig", r.min_eig},
                       {"flags", r.flags}});
    }
    os << arr.dump(2) << '\n';
}

std::vector<Row> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("results", "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw ConfigError("results[0]", std::string("expected header '") + header + "'");
    std::vector<Row> rows;
    for (std::size_t n = 1; std::getline(is, line); ++n) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 6) throw ConfigError("results[" + std::to_string(n) + "]", "expected 6 columns");
        Row r;
        r.t_f = parse_number(f[0], n, "t_f_ns");
        r.method = f[1];
        r.p_ground = parse_number(f[2], n, "P_G");
        r.trace_err = parse_number(f[3], n, "trace_err");
        r.min_eig = parse_number(f[4], n, "min_eig");
        std::stringstream fs(f[5]);
        for (std::string flag; std::getline(fs, flag, ';');)
            if (!flag.empty()) r.flags.push_back(flag);
        rows.push_back(std::move(r));
    }
    return rows;
}

double extrema_period(const std::vector<double>& t, const std::vector<double>& p, std::size_t* count) {
    // strict local maxima; plateaus count once, at their right end
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (!(p[i] > p[i - 1])) continue;
        std::size_t j = i;
        while (j + 1 < p.size() && p[j + 1] == p[i]) ++j;
        if (j + 1 < p.size() && p[j + 1] < p[i]) peaks.push_back(t[j]);
        i = j;
    }
    if (count) *count = peaks.size();
    if (peaks.size() < 2) return 0.0;
    return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

CompareSummary compare_methods(const std::vector<Row>& rows, const std::string& a, const std::string& b) {
    std::map<double, double> ca, cb;
    for (const Row& r : rows) {
        if (r.method == a) ca[r.t_f] = r.p_ground;
        if (r.method == b) cb[r.t_f] = r.p_ground;
    }
    if (ca.empty()) throw ConfigError("method_a", "method '" + a + "' not present in results");
    if (cb.empty()) throw ConfigError("method_b", "method '" + b + "' not present in results");
    CompareSummary s;
    s.method_a = a;
    s.method_b = b;
    double sum = 0.0;
    for (const auto& [t, pa] : ca) {
        auto it = cb.find(t);
        if (it == cb.end()) continue;
        const double d = std::abs(pa - it->second);
        s.max_abs_dev = std::max(s.max_abs_dev, d);
        sum += d;
        ++s.shared_points;
    }
    if (s.shared_points == 0) throw ConfigError("results", "methods share no t_f values");
    s.mean_abs_dev = sum / static_cast<double>(s.shared_points);
    auto period = [](const std::map<double, double>& c, std::size_t* n) {
        std::vector<double> t, p;
        for (const auto& [x, y] : c) {
            t.push_back(x);
            p.push_back(y);
        }
        return extrema_period(t, p, n);
    };
    s.period_a = period(ca, &s.maxima_a);
    s.period_b = period(cb, &s.maxima_b);
    return s;
}

json to_json(const CompareSummary& s) {
    return {{"method_a", s.method_a},         {"method_b", s.method_b},
            {"shared_points", s.shared_points}, {"max_abs_dev", s.max_abs_dev},
            {"mean_abs_dev", s.mean_abs_dev},   {"period_a", s.period_a},
            {"period_b", s.period_b},           {"maxima_a", s.maxima_a},
            {"maxima_b", s.maxima_b}};
}

std::vector<std::string> write_schedule_table(std::ostream& os, const SynthConfig& cfg) {
    const auto built = schedule::build_schedule(cfg.schedule);
    const auto cart = schedule::cartesian_from_angular(built.schedule);
    os << "s,A,B,Omega,theta\n";
    for (std::size_t i = 0; i < cfg.points; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(cfg.points - 1);
        os << format_number(s) << ',' << format_number(cart.A(s)) << ',' << format_number(cart.B(s)) << ','
           << format_number(built.schedule.omega(s)) << ',' << format_number(built.schedule.theta(s)) << '\n';
    }
    return built.warnings;
}

} // namespace slitqa::cli
