#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tcsc/bench.hpp"

namespace tcsc {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
    return f;
}

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
}

std::string num(double x) {
    if (std::isnan(x)) return "NA";
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

}  // namespace

std::vector<std::string> parse_schemes(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        item = item.substr(b, e - b + 1);
        if (item == "all") {
            out.insert(out.end(), scheme_names().begin(), scheme_names().end());
            continue;
        }
        if (std::find(scheme_names().begin(), scheme_names().end(), item) == scheme_names().end()) {
            std::string valid;
            for (const auto& n : scheme_names()) valid += (valid.empty() ? "" : ", ") + n;
            throw Error(ErrorCode::Usage, "unknown scheme '" + item + "' (valid: " + valid + ")");
        }
        out.push_back(item);
    }
    if (out.empty()) throw Error(ErrorCode::Usage, "no schemes given");
    return out;
}

Schedule run_scheme(const Config& c, const Instance& inst, const std::string& scheme, std::vector<TraceRow>* trace) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& m = inst.model;
    const auto& s = inst.scenarios;
    Schedule sch;
    if (scheme == "tcsc-central") {
        SolveLimits lim;
        lim.time_limit = c.time_limit_per_vehicle * m.n();
        lim.gap_tol = c.gap_tol;
        sch = solve_centralized(m, s, lim, c.build);
    } else if (scheme == "tcsc-decent") {
        auto r = run_decentralized(m, s, c.decentral);
        if (trace) *trace = std::move(r.trace);
        sch = std::move(r.schedule);
    } else if (scheme == "smart-chg-heat") {
        sch = run_smart_chg_heat(m, s, c.baselines);
    } else if (scheme == "instant-chg-heat") {
        sch = run_instant_chg_heat(m, s, c.baselines);
    } else if (scheme == "no-heat") {
        sch = run_no_heat(m, s, c.baselines);
    } else {
        parse_schemes(scheme);  // throws the usage error
    }
    sch.scheme = scheme;
    sch.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sch;
}

CompareResult cmd_compare(const Config& c, const std::vector<std::string>& schemes,
                          const std::optional<fs::path>& out_dir) {
    const Instance inst = build_instance(c);
    CompareResult res;
    for (const auto& name : schemes) {
        Schedule sch = run_scheme(c, inst, name, &res.dual_trace);
        auto rep = compute_metrics(sch, inst.model, inst.scenarios, c.cost_basis);
        rep.instance = c.name;
        res.rows.push_back(rep);
        res.schedules.push_back(std::move(sch));
    }
    if (out_dir) {
        make_dir(*out_dir);
        auto csv = open_out(*out_dir / "metrics.csv");
        write_metrics_csv(csv, res.rows);
        auto js = open_out(*out_dir / "metrics.json");
        write_metrics_json(js, res.rows);
        if (!res.dual_trace.empty()) {
            auto f = open_out(*out_dir / "dual_trace.csv");
            write_trace_csv(f, res.dual_trace);
        }
        for (const auto& sch : res.schedules) {
            auto f = open_out(*out_dir / ("schedule_" + sch.scheme + ".json"));
            write_schedule_json(f, sch, inst.model);
            for (int i = 0; i < inst.model.n(); ++i) {
                auto v = open_out(*out_dir / ("trajectory_" + sch.scheme + "_" + inst.model.fleet[i].id + ".csv"));
                write_vehicle_csv(v, sch, inst.model, i);
            }
        }
    }
    return res;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

SweepResult cmd_sweep(const Config& c, const std::vector<double>& shifts, const std::vector<std::string>& schemes,
                      const std::optional<fs::path>& out_dir) {
    SweepResult res;
    for (double sh : shifts) {
        if (!std::isfinite(sh)) throw Error(ErrorCode::Usage, "temperature shifts must be finite");
        Config cs = c;
        cs.temp_shift = c.temp_shift + sh;
        const Instance inst = build_instance(cs);
        for (const auto& name : schemes) {
            const Schedule sch = run_scheme(cs, inst, name);
            auto rep = compute_metrics(sch, inst.model, inst.scenarios, c.cost_basis);
            rep.instance = c.name;
            res.rows.push_back({name, sh, rep});
        }
    }
    for (const auto& name : schemes) {
        std::vector<double> xc, yc, xo, yo;
        for (const auto& r : res.rows) {
            if (r.scheme != name) continue;
            if (r.metrics.charging_cost) {
                xc.push_back(r.shift);
                yc.push_back(*r.metrics.charging_cost);
            }
            xo.push_back(r.shift);
            yo.push_back(r.metrics.overhead_rate);
        }
        res.slopes.push_back({name, ls_slope(xc, yc), ls_slope(xo, yo)});
    }
    if (out_dir) {
        make_dir(*out_dir);
        auto f = open_out(*out_dir / "sweep.csv");
        write_sweep_csv(f, res);
        auto g = open_out(*out_dir / "slopes.csv");
        write_slopes_csv(g, res);
    }
    return res;
}

std::vector<ScaleRow> cmd_scale(const Config& c, const std::vector<int>& sizes, const std::vector<int>& scen_counts,
                                const std::optional<fs::path>& out_dir) {
    if (!c.vehicles.empty()) throw Error(ErrorCode::Usage, "scale needs a generated fleet, not an explicit list");
    std::vector<ScaleRow> rows;
    for (int n : sizes)
        for (int w : scen_counts) {
            if (n < 1 || w < 1) throw Error(ErrorCode::Usage, "sizes and scenario counts must be positive");
            Config cs = c;
            cs.n_vehicles = n;
            cs.n_scenarios = w;
            const Instance inst = build_instance(cs);
            for (const std::string name : {"tcsc-central", "tcsc-decent"}) {
                ScaleRow r{name, n, w, "ok", 0.0, std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN()};
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    const Schedule sch = run_scheme(cs, inst, name);
                    r.status = sch.status;
                    r.objective = sch.solver_objective;
                    r.gap = sch.gap;
                } catch (const Error& e) {
                    r.status = e.code() == ErrorCode::Timeout      ? "timeout"
                               : e.code() == ErrorCode::Infeasible ? "infeasible"
                                                                   : "error";
                } catch (const std::bad_alloc&) {
                    r.status = "out_of_memory";
                }
                r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                rows.push_back(r);
            }
        }
    if (out_dir) {
        make_dir(*out_dir);
        auto f = open_out(*out_dir / "scale.csv");
        write_scale_csv(f, rows);
    }
    return rows;
}

void dump_lp(const Config& c, std::ostream& os, bool full) {
    const Instance inst = build_instance(c);
    BuildOptions opt = c.build;
    opt.form = full ? Formulation::Full : Formulation::Collapsed;
    const auto b = build_centralized(inst.model, inst.scenarios, opt);
    lp::write_lp_format(os, b.problem.lp, b.problem.binaries);
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << "scheme,shift,unmet_soc,charging_cost,overhead_rate,solar_usage_rate,expected_cost\n";
    for (const auto& row : r.rows) {
        const auto& m = row.metrics;
        os << row.scheme << ',' << num(row.shift) << ',' << num(m.unmet_soc) << ','
           << (m.charging_cost ? num(*m.charging_cost) : "NA") << ',' << num(m.overhead_rate) << ','
           << num(m.solar_usage_rate) << ',' << num(m.expected_cost) << '\n';
    }
}

void write_slopes_csv(std::ostream& os, const SweepResult& r) {
    os << "scheme,cost_slope,overhead_slope\n";
    for (const auto& s : r.slopes) os << s.scheme << ',' << num(s.cost_slope) << ',' << num(s.overhead_slope) << '\n';
}

void write_scale_csv(std::ostream& os, const std::vector<ScaleRow>& rows) {
    os << "scheme,vehicles,scenarios,status,wall_time,objective,gap\n";
    for (const auto& r : rows)
        os << r.scheme << ',' << r.vehicles << ',' << r.scenarios << ',' << r.status << ',' << num(r.wall_time) << ','
           << num(r.objective) << ',' << num(r.gap) << '\n';
}

}  // namespace tcsc
