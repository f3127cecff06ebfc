#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tcsc/bench.hpp"

namespace tcsc {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::Parse, "config: " + where + ": " + what);
}

// Reads keys from one JSON object and rejects keys it never asked about.
class Section {
public:
    Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) bad(where_, "expected an object");
    }
    ~Section() noexcept(false) {
        if (std::uncaught_exceptions()) return;
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) bad(where_, "unknown key '" + k + "'");
    }

    bool has(const std::string& k) {
        seen_.insert(k);
        return j_.contains(k) && !j_[k].is_null();
    }
    template <class T>
    void get(const std::string& k, T& out) {
        if (!has(k)) return;
        try {
            out = j_[k].get<T>();
        } catch (const json::exception&) {
            bad(where_ + "." + k, "wrong type");
        }
    }
    void range(const std::string& k, double& lo, double& hi) {
        std::vector<double> v;
        get(k, v);
        if (!has(k)) return;
        if (v.size() != 2) bad(where_ + "." + k, "expected [low, high]");
        lo = v[0];
        hi = v[1];
    }
    const json& sub(const std::string& k) {
        seen_.insert(k);
        return j_[k];
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path q(p);
    return q.is_absolute() || base.empty() ? q : base / q;
}

VehicleSpec parse_vehicle(const json& j, int k) {
    VehicleSpec v;
    v.id = "ev" + std::to_string(k + 1);
    Section s(j, "fleet.list[" + std::to_string(k) + "]");
    s.get("id", v.id);
    s.get("capacity_kwh", v.capacity);
    s.get("mass_kg", v.mass);
    s.get("p_max_kw", v.p_max);
    s.get("pc_bar_kw", v.pc_bar);
    s.get("beta_chg", v.beta_chg);
    s.get("ph_bar_kw", v.ph_bar);
    s.get("beta_heat", v.beta_heat);
    s.get("soc_arr", v.soc_arr);
    s.get("soc_dep", v.soc_dep);
    s.get("temp_arr", v.temp_arr);
    s.get("arrival_step", v.ta);
    s.get("departure_step", v.td);
    return v;
}

}  // namespace

Config parse_config(const std::string& text, const fs::path& base) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, std::string("config is not valid JSON: ") + e.what());
    }
    Config c;
    Section top(j, "config");
    top.get("name", c.name);
    top.get("seed", c.seed);
    if (top.has("horizon")) {
        Section s(top.sub("horizon"), "horizon");
        s.get("start_hour", c.grid.start_hour);
        s.get("n_steps", c.grid.n_steps);
        s.get("dt_hours", c.grid.dt);
    }
    if (top.has("tariff")) {
        Section s(top.sub("tariff"), "tariff");
        std::string p;
        s.get("csv", p);
        if (!p.empty()) c.tariff_csv = resolve(base, p);
    }
    if (top.has("thermal")) {
        Section s(top.sub("thermal"), "thermal");
        auto& t = c.thermal;
        s.get("heat_capacity", t.heat_capacity);
        s.get("loss_hA", t.loss_hA);
        s.get("mu_heat", t.mu_heat);
        s.get("eta_heat", t.eta_heat);
        s.get("eta_chg", t.eta_chg);
        s.get("mu_chg", t.mu_chg);
        s.get("T_lo", t.T_lo);
        s.get("T_hi", t.T_hi);
        s.get("T_set", t.T_set);
    }
    if (top.has("fleet")) {
        Section s(top.sub("fleet"), "fleet");
        auto& o = c.fleet_options;
        s.get("vehicles", c.n_vehicles);
        s.range("arrival_hours", o.arrival_lo, o.arrival_hi);
        s.range("departure_hours", o.departure_lo, o.departure_hi);
        s.range("arrival_temp", o.temp_arr_lo, o.temp_arr_hi);
        s.range("arrival_soc", o.soc_arr_lo, o.soc_arr_hi);
        s.get("departure_soc", o.soc_dep);
        s.get("fluctuation", o.fluctuation);
        if (s.has("list")) {
            const auto& list = s.sub("list");
            if (!list.is_array()) bad("fleet.list", "expected an array");
            for (std::size_t k = 0; k < list.size(); ++k) c.vehicles.push_back(parse_vehicle(list[k], static_cast<int>(k)));
            c.n_vehicles = static_cast<int>(c.vehicles.size());
        }
    }
    if (top.has("station")) {
        Section s(top.sub("station"), "station");
        double pg = 0.0;
        if (s.has("pg_max_kw")) {
            s.get("pg_max_kw", pg);
            c.pg_max = pg;
        }
        s.get("pg_fraction", c.pg_fraction);
        s.get("big_M_T", c.big_M_T);
        s.get("big_M_P", c.big_M_P);
    }
    if (top.has("solar")) {
        Section s(top.sub("solar"), "solar");
        std::vector<std::string> files;
        if (s.has("csv")) {
            const auto& v = s.sub("csv");
            if (v.is_string()) files.push_back(v.get<std::string>());
            else s.get("csv", files);
        }
        for (const auto& f : files) c.solar_csv.push_back(resolve(base, f));
        s.get("sunrise", c.sunrise);
        s.get("sunset", c.sunset);
        s.get("max_fraction", c.solar_fraction);
        s.get("scale_up", c.solar_scale_up);
    }
    if (top.has("temperature")) {
        Section s(top.sub("temperature"), "temperature");
        std::string p;
        s.get("csv", p);
        if (!p.empty()) c.temperature_csv = resolve(base, p);
        s.get("min", c.temp_min);
        s.get("max", c.temp_max);
        s.get("shift", c.temp_shift);
    }
    if (top.has("scenarios")) {
        Section s(top.sub("scenarios"), "scenarios");
        s.get("count", c.n_scenarios);
        s.get("solar_noise", c.scenario_options.solar_noise);
        s.get("temp_noise", c.scenario_options.temp_noise);
        s.get("temp_shift", c.scenario_options.temp_shift);
    }
    if (top.has("solver")) {
        Section s(top.sub("solver"), "solver");
        s.get("time_limit_per_vehicle", c.time_limit_per_vehicle);
        s.get("gap_tol", c.gap_tol);
        s.get("penalty", c.build.penalty);
        s.get("soft_departure", c.build.soft_departure);
    }
    if (top.has("decentral")) {
        Section s(top.sub("decentral"), "decentral");
        auto& d = c.decentral;
        s.get("step_sizes", d.step_sizes);
        s.get("n_iter", d.n_iter);
        s.get("dual_seconds_per_vehicle", d.dual_seconds_per_vehicle);
        s.get("reschedule_seconds_per_vehicle", d.reschedule_seconds_per_vehicle);
    }
    if (top.has("baselines")) {
        Section s(top.sub("baselines"), "baselines");
        s.get("ratio_grid", c.baselines.ratio_grid);
        s.get("deadband", c.baselines.deadband);
        s.get("no_heat_rounds", c.baselines.no_heat_rounds);
    }
    if (top.has("metrics")) {
        Section s(top.sub("metrics"), "metrics");
        std::string basis = "battery";
        s.get("cost_basis", basis);
        if (basis == "battery") c.cost_basis = CostBasis::Battery;
        else if (basis == "plug") c.cost_basis = CostBasis::Plug;
        else bad("metrics.cost_basis", "expected 'battery' or 'plug'");
    }
    c.decentral.build = c.build;
    c.baselines.penalty = c.build.penalty;
    c.baselines.cost_basis = c.cost_basis;

    if (c.n_vehicles < 1) bad("fleet.vehicles", "need at least one vehicle");
    if (c.n_scenarios < 1) bad("scenarios.count", "need at least one scenario");
    if (!(c.time_limit_per_vehicle > 0.0)) bad("solver.time_limit_per_vehicle", "must be positive");
    if (!(c.gap_tol >= 0.0)) bad("solver.gap_tol", "must be >= 0");
    if (!(c.solar_fraction >= 0.0)) bad("solar.max_fraction", "must be >= 0");
    return c;
}

Config load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::string default_config_json(int n_vehicles, int n_scenarios, std::uint64_t seed) {
    const Config c;
    const auto& o = c.fleet_options;
    const auto& t = c.thermal;
    ojson j;
    j["name"] = "cold-day";
    j["seed"] = seed;
    j["horizon"] = {{"start_hour", c.grid.start_hour}, {"n_steps", c.grid.n_steps}, {"dt_hours", c.grid.dt}};
    j["thermal"] = {{"heat_capacity", t.heat_capacity}, {"loss_hA", t.loss_hA}, {"mu_heat", t.mu_heat},
                    {"eta_heat", t.eta_heat},           {"eta_chg", t.eta_chg}, {"mu_chg", t.mu_chg},
                    {"T_lo", t.T_lo},                   {"T_hi", t.T_hi},       {"T_set", t.T_set}};
    j["fleet"] = {{"vehicles", n_vehicles},
                  {"arrival_hours", {o.arrival_lo, o.arrival_hi}},
                  {"departure_hours", {o.departure_lo, o.departure_hi}},
                  {"arrival_temp", {o.temp_arr_lo, o.temp_arr_hi}},
                  {"arrival_soc", {o.soc_arr_lo, o.soc_arr_hi}},
                  {"departure_soc", o.soc_dep},
                  {"fluctuation", o.fluctuation}};
    j["station"] = {{"pg_fraction", c.pg_fraction}, {"big_M_T", c.big_M_T}, {"big_M_P", c.big_M_P}};
    j["solar"] = {{"sunrise", c.sunrise}, {"sunset", c.sunset}, {"max_fraction", c.solar_fraction},
                  {"scale_up", c.solar_scale_up}};
    j["temperature"] = {{"min", c.temp_min}, {"max", c.temp_max}, {"shift", c.temp_shift}};
    j["scenarios"] = {{"count", n_scenarios},
                      {"solar_noise", c.scenario_options.solar_noise},
                      {"temp_noise", c.scenario_options.temp_noise},
                      {"temp_shift", c.scenario_options.temp_shift}};
    j["solver"] = {{"time_limit_per_vehicle", c.time_limit_per_vehicle},
                   {"gap_tol", c.gap_tol},
                   {"penalty", c.build.penalty},
                   {"soft_departure", c.build.soft_departure}};
    j["decentral"] = {{"step_sizes", c.decentral.step_sizes},
                      {"n_iter", c.decentral.n_iter},
                      {"dual_seconds_per_vehicle", c.decentral.dual_seconds_per_vehicle},
                      {"reschedule_seconds_per_vehicle", c.decentral.reschedule_seconds_per_vehicle}};
    j["baselines"] = {{"ratio_grid", c.baselines.ratio_grid},
                      {"deadband", c.baselines.deadband},
                      {"no_heat_rounds", c.baselines.no_heat_rounds}};
    j["metrics"] = {{"cost_basis", "battery"}};
    return j.dump(2) + "\n";
}

Instance build_instance(const Config& c) {
    Instance in;
    auto& m = in.model;
    m.grid = c.grid;
    m.grid.validate();
    m.thermal = c.thermal;
    m.tariff = c.tariff_csv ? Tariff{load_timeseries(*c.tariff_csv, SeriesKind::Price, m.grid)}
                            : build_tou_tariff(m.grid);
    m.fleet = c.vehicles.empty() ? gen_fleet(c.n_vehicles, c.seed, m.grid, c.fleet_options) : c.vehicles;
    double connected = 0.0;
    for (const auto& v : m.fleet) connected += v.p_max;
    m.pg_max = c.pg_max ? *c.pg_max : c.pg_fraction * connected;
    m.big_M_T = c.big_M_T;
    m.big_M_P = c.big_M_P;

    std::vector<double> solar;
    if (c.solar_csv.empty()) {
        solar = synthetic_solar(m.grid, 1.0, c.sunrise, c.sunset);
    } else {
        solar.assign(m.grid.n_steps, 0.0);
        for (const auto& f : c.solar_csv) {
            const auto one = load_timeseries(f, SeriesKind::Solar, m.grid);
            for (int t = 0; t < m.grid.n_steps; ++t) solar[t] += one[t] / static_cast<double>(c.solar_csv.size());
        }
    }
    scale_solar(solar, m.fleet, c.solar_fraction, c.solar_scale_up);
    const auto temp = c.temperature_csv ? load_timeseries(*c.temperature_csv, SeriesKind::Temperature, m.grid)
                                        : synthetic_temperature(m.grid, c.temp_min, c.temp_max);
    in.scenarios = gen_scenarios(solar, temp, c.n_scenarios, c.seed + 1, c.scenario_options);
    for (auto& row : in.scenarios.temp_amb)
        for (auto& x : row) x += c.temp_shift;
    m.validate();
    in.scenarios.validate(m.grid.n_steps);
    return in;
}

}  // namespace tcsc
