#include "tcsc/tcsc.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "tcsc/bench.hpp"

struct tcsc_instance {
    tcsc::Config config;
    tcsc::Instance inst;
};

struct tcsc_schedule {
    tcsc::Schedule sch;
    tcsc::MetricsReport metrics;
    tcsc::StationModel model;
};

namespace {

thread_local std::string last_error;

tcsc_status fail(tcsc_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
tcsc_status guard(F&& f) {
    try {
        last_error.clear();
        f();
        return TCSC_OK;
    } catch (const tcsc::Error& e) {
        return fail(static_cast<tcsc_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(TCSC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TCSC_ERR_INTERNAL, e.what());
    }
}

void need(const void* p, const char* what) {
    if (!p) throw tcsc::Error(tcsc::ErrorCode::Usage, std::string(what) + " is null");
}

void apply(tcsc::Config& c, const tcsc_overrides* o) {
    if (!o) return;
    if (o->seed >= 0) c.seed = static_cast<std::uint64_t>(o->seed);
    if (o->time_limit_per_vehicle > 0.0) c.time_limit_per_vehicle = o->time_limit_per_vehicle;
    if (o->gap_tol >= 0.0) c.gap_tol = o->gap_tol;
}

tcsc::Config load(const char* path, const tcsc_overrides* o) {
    need(path, "config path");
    auto c = tcsc::load_config(path);
    apply(c, o);
    return c;
}

// "-" means standard output.
template <class F>
void with_output(const char* path, F&& f) {
    if (std::string(path) == "-") {
        f(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tcsc::Error(tcsc::ErrorCode::Io, std::string("cannot write '") + path + "'");
    f(out);
    if (!out) throw tcsc::Error(tcsc::ErrorCode::Io, std::string("write failed for '") + path + "'");
}

std::string schemes_or_all(const char* s) { return s && *s ? s : "all"; }

}  // namespace

extern "C" {

const char* tcsc_version(void) { return "1.0.0"; }

const char* tcsc_last_error(void) { return last_error.c_str(); }

void tcsc_overrides_init(tcsc_overrides* o) {
    if (!o) return;
    o->seed = -1;
    o->time_limit_per_vehicle = -1.0;
    o->gap_tol = -1.0;
}

tcsc_status tcsc_instance_load(const char* config_path, const tcsc_overrides* o, tcsc_instance** out) {
    return guard([&] {
        need(out, "output handle");
        auto h = std::make_unique<tcsc_instance>();
        h->config = load(config_path, o);
        h->inst = tcsc::build_instance(h->config);
        *out = h.release();
    });
}

tcsc_status tcsc_instance_parse(const char* config_json, const char* base_dir, const tcsc_overrides* o,
                                tcsc_instance** out) {
    return guard([&] {
        need(config_json, "config text");
        need(out, "output handle");
        auto h = std::make_unique<tcsc_instance>();
        h->config = tcsc::parse_config(config_json, base_dir ? base_dir : "");
        apply(h->config, o);
        h->inst = tcsc::build_instance(h->config);
        *out = h.release();
    });
}

void tcsc_instance_free(tcsc_instance* inst) { delete inst; }

int tcsc_instance_vehicles(const tcsc_instance* inst) { return inst ? inst->inst.model.n() : -1; }
int tcsc_instance_steps(const tcsc_instance* inst) { return inst ? inst->inst.model.grid.n_steps : -1; }
int tcsc_instance_scenarios(const tcsc_instance* inst) { return inst ? inst->inst.scenarios.size() : -1; }

tcsc_status tcsc_solve(const tcsc_instance* inst, const char* scheme, tcsc_schedule** out) {
    return guard([&] {
        need(inst, "instance");
        need(scheme, "scheme");
        need(out, "output handle");
        auto h = std::make_unique<tcsc_schedule>();
        h->sch = tcsc::run_scheme(inst->config, inst->inst, scheme);
        h->metrics = tcsc::compute_metrics(h->sch, inst->inst.model, inst->inst.scenarios, inst->config.cost_basis);
        h->metrics.instance = inst->config.name;
        h->model = inst->inst.model;
        *out = h.release();
    });
}

void tcsc_schedule_free(tcsc_schedule* sch) { delete sch; }

tcsc_status tcsc_schedule_metrics(const tcsc_schedule* sch, tcsc_metrics* out) {
    return guard([&] {
        need(sch, "schedule");
        need(out, "output");
        const auto& m = sch->metrics;
        out->unmet_soc = m.unmet_soc;
        out->has_charging_cost = m.charging_cost.has_value();
        out->charging_cost = m.charging_cost.value_or(0.0);
        out->overhead_rate = m.overhead_rate;
        out->solar_usage_rate = m.solar_usage_rate;
        out->expected_cost = m.expected_cost;
        out->wall_time = m.wall_time;
    });
}

tcsc_status tcsc_schedule_powers(const tcsc_schedule* sch, int scenario, int vehicle, double* p_chg, double* p_heat,
                                 size_t len) {
    return guard([&] {
        need(sch, "schedule");
        const auto& s = sch->sch;
        if (scenario < 0 || scenario >= s.n_scen || vehicle < 0 || vehicle >= s.n_vehicles)
            throw tcsc::Error(tcsc::ErrorCode::Usage, "scenario or vehicle index out of range");
        if (len < static_cast<size_t>(s.n_steps))
            throw tcsc::Error(tcsc::ErrorCode::Usage, "buffer shorter than the horizon");
        for (int t = 0; t < s.n_steps; ++t) {
            if (p_chg) p_chg[t] = s.p_chg[scenario][vehicle][t];
            if (p_heat) p_heat[t] = s.p_heat[scenario][vehicle][t];
        }
    });
}

tcsc_status tcsc_schedule_write_json(const tcsc_schedule* sch, const char* path) {
    return guard([&] {
        need(sch, "schedule");
        need(path, "path");
        with_output(path, [&](std::ostream& f) { tcsc::write_schedule_json(f, sch->sch, sch->model); });
    });
}

tcsc_status tcsc_cmd_compare(const char* config_path, const char* schemes, const char* out_dir,
                             const tcsc_overrides* o) {
    return guard([&] {
        need(out_dir, "output directory");
        const auto c = load(config_path, o);
        tcsc::cmd_compare(c, tcsc::parse_schemes(schemes_or_all(schemes)), std::filesystem::path(out_dir));
    });
}

tcsc_status tcsc_cmd_sweep(const char* config_path, const double* shifts, size_t n_shifts, const char* schemes,
                           const char* out_dir, const tcsc_overrides* o) {
    return guard([&] {
        need(out_dir, "output directory");
        if (n_shifts == 0) throw tcsc::Error(tcsc::ErrorCode::Usage, "no temperature shifts given");
        need(shifts, "shifts");
        const auto c = load(config_path, o);
        tcsc::cmd_sweep(c, std::vector<double>(shifts, shifts + n_shifts), tcsc::parse_schemes(schemes_or_all(schemes)),
                        std::filesystem::path(out_dir));
    });
}

tcsc_status tcsc_cmd_scale(const char* config_path, const int* sizes, size_t n_sizes, const int* scen_counts,
                           size_t n_scen, const char* out_dir, const tcsc_overrides* o) {
    return guard([&] {
        need(out_dir, "output directory");
        if (n_sizes == 0 || n_scen == 0) throw tcsc::Error(tcsc::ErrorCode::Usage, "no sizes given");
        need(sizes, "sizes");
        need(scen_counts, "scenario counts");
        const auto c = load(config_path, o);
        tcsc::cmd_scale(c, std::vector<int>(sizes, sizes + n_sizes), std::vector<int>(scen_counts, scen_counts + n_scen),
                        std::filesystem::path(out_dir));
    });
}

tcsc_status tcsc_cmd_gen_config(const char* path, int vehicles, int scenarios, int64_t seed) {
    return guard([&] {
        need(path, "path");
        if (vehicles < 1 || scenarios < 1 || seed < 0)
            throw tcsc::Error(tcsc::ErrorCode::Usage, "vehicles and scenarios must be positive, seed >= 0");
        with_output(path, [&](std::ostream& f) {
            f << tcsc::default_config_json(vehicles, scenarios, static_cast<std::uint64_t>(seed));
        });
    });
}

tcsc_status tcsc_cmd_dump_lp(const char* config_path, const char* path, int full, const tcsc_overrides* o) {
    return guard([&] {
        need(path, "path");
        const auto c = load(config_path, o);
        with_output(path, [&](std::ostream& f) { tcsc::dump_lp(c, f, full != 0); });
    });
}

}  // extern "C"
