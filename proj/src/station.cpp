#include "tcsc/station.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tcsc {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::Invalid, msg); }

}  // namespace

void TimeGrid::validate() const {
    if (n_steps < 1) invalid("time grid needs at least one step");
    if (!(dt > 0.0)) invalid("time step must be positive");
    if (start_hour < 0.0 || end_hour() > 24.0 + 1e-9) invalid("time grid must lie within 0-24 h");
}

void VehicleSpec::validate(const TimeGrid& grid) const {
    const std::string who = "vehicle '" + id + "': ";
    if (!(capacity > 0.0)) invalid(who + "capacity must be positive");
    if (!(mass > 0.0)) invalid(who + "mass must be positive");
    if (!(p_max > 0.0)) invalid(who + "total power limit must be positive");
    if (pc_bar < 0.0 || ph_bar < 0.0 || beta_chg < 0.0 || beta_heat < 0.0)
        invalid(who + "power coefficients must be non-negative");
    if (soc_arr < 0.0 || soc_arr > 1.0) invalid(who + "arrival SoC outside [0,1]");
    if (soc_dep < 0.0 || soc_dep > 1.0) invalid(who + "departure SoC outside [0,1]");
    if (!std::isfinite(temp_arr)) invalid(who + "arrival temperature not finite");
    if (ta < 0 || ta >= td || td > grid.n_steps)
        invalid(who + "parking window [" + std::to_string(ta) + ", " + std::to_string(td) +
                ") outside the grid of " + std::to_string(grid.n_steps) + " steps");
}

void ThermalParams::validate() const {
    if (!(heat_capacity > 0.0)) invalid("heat capacity must be positive");
    if (loss_hA < 0.0) invalid("loss coefficient must be non-negative");
    if (!(eta_chg > 0.0 && eta_chg <= 1.0)) invalid("charging efficiency outside (0,1]");
    if (!(eta_heat > 0.0 && eta_heat <= 1.0)) invalid("heating efficiency outside (0,1]");
    if (!(mu_heat > 0.0 && mu_heat <= 1.0)) invalid("insulation coefficient outside (0,1]");
    if (mu_chg < 0.0) invalid("cold charging slope must be non-negative");
    if (!(T_lo < T_set && T_set < T_hi)) invalid("need T_lo < T_set < T_hi");
}

void Tariff::validate(int n_steps) const {
    if (static_cast<int>(price.size()) != n_steps) invalid("tariff length does not match the grid");
    for (double p : price)
        if (!(p > 0.0) || !std::isfinite(p)) invalid("tariff prices must be positive");
}

void ScenarioSet::validate(int n_steps) const {
    if (prob.empty()) invalid("scenario set is empty");
    if (static_cast<int>(pv_cap.size()) != size() || static_cast<int>(temp_amb.size()) != size())
        invalid("scenario matrices do not match the probability vector");
    double total = 0.0;
    for (int w = 0; w < size(); ++w) {
        if (!(prob[w] > 0.0)) invalid("scenario probabilities must be positive");
        total += prob[w];
        if (static_cast<int>(pv_cap[w].size()) != n_steps || static_cast<int>(temp_amb[w].size()) != n_steps)
            invalid("scenario " + std::to_string(w) + " length does not match the grid");
        for (int t = 0; t < n_steps; ++t) {
            if (!(pv_cap[w][t] >= 0.0) || !std::isfinite(pv_cap[w][t])) invalid("solar caps must be >= 0");
            if (!std::isfinite(temp_amb[w][t])) invalid("ambient temperature not finite");
        }
    }
    if (std::abs(total - 1.0) > 1e-9) invalid("scenario probabilities must sum to 1");
}

double ScenarioSet::min_pv(int t) const {
    double v = pv_cap[0][t];
    for (int w = 1; w < size(); ++w) v = std::min(v, pv_cap[w][t]);
    return v;
}

void StationModel::validate() const {
    grid.validate();
    tariff.validate(grid.n_steps);
    thermal.validate();
    if (fleet.empty()) invalid("fleet is empty");
    for (const auto& v : fleet) v.validate(grid);
    if (!(pg_max > 0.0)) invalid("grid limit must be positive");
    if (!(big_M_T > 0.0) || !(big_M_P > 0.0)) invalid("big-M constants must be positive");
}

// ---- RNG ---------------------------------------------------------------------

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
}

Rng Rng::split(std::uint64_t key) const {
    Rng child(state_ ^ (key * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
    child.next();
    return child;
}

// ---- tariff ------------------------------------------------------------------

double tou_price(double hour) {
    if (hour < 8.0 || hour >= 18.0) return 12.48;
    if (hour < 12.0) return 17.22;
    return 22.09;
}

Tariff build_tou_tariff(const TimeGrid& grid) {
    Tariff t;
    t.price.resize(grid.n_steps);
    for (int s = 0; s < grid.n_steps; ++s) t.price[s] = tou_price(grid.hour_of(s) + 1e-9);
    return t;
}

// ---- generators --------------------------------------------------------------

std::vector<VehicleSpec> gen_fleet(int n, std::uint64_t seed, const TimeGrid& grid, const FleetOptions& opt) {
    if (n < 1) throw Error(ErrorCode::Invalid, "empty fleet: vehicle count must be at least 1");
    grid.validate();
    const Rng root(seed);
    std::vector<VehicleSpec> fleet;
    fleet.reserve(n);
    auto to_step = [&](double hour) {
        const int s = static_cast<int>(std::lround((hour - grid.start_hour) / grid.dt));
        return std::clamp(s, 0, grid.n_steps);
    };
    for (int i = 0; i < n; ++i) {
        Rng r = root.split(static_cast<std::uint64_t>(i));
        const double f = opt.fluctuation;
        auto jitter = [&](double base) { return base * r.uniform(1.0 - f, 1.0 + f); };
        VehicleSpec v;
        v.id = "ev" + std::to_string(i);
        v.capacity = jitter(37.0);
        v.mass = jitter(235.88);
        v.p_max = jitter(7.4);
        v.pc_bar = jitter(4.8);
        v.beta_chg = jitter(0.12);
        v.ph_bar = jitter(3.0);
        v.beta_heat = jitter(0.024);
        v.soc_arr = r.uniform(opt.soc_arr_lo, opt.soc_arr_hi);
        v.soc_dep = opt.soc_dep;
        v.temp_arr = r.uniform(opt.temp_arr_lo, opt.temp_arr_hi);
        v.ta = std::min(to_step(r.uniform(opt.arrival_lo, opt.arrival_hi)), grid.n_steps - 1);
        v.td = std::max(to_step(r.uniform(opt.departure_lo, opt.departure_hi)), v.ta + 1);
        fleet.push_back(std::move(v));
    }
    return fleet;
}

ScenarioSet gen_scenarios(const std::vector<double>& base_solar, const std::vector<double>& base_temp, int n_scen,
                          std::uint64_t seed, const ScenarioOptions& opt) {
    if (n_scen < 1) throw Error(ErrorCode::Invalid, "scenario count must be at least 1");
    if (base_solar.size() != base_temp.size())
        throw Error(ErrorCode::Invalid, "solar and temperature profiles differ in length");
    for (std::size_t t = 0; t < base_solar.size(); ++t)
        if (!(base_solar[t] >= 0.0))
            throw Error(ErrorCode::Invalid, "negative base solar value at step " + std::to_string(t));
    const Rng root(seed);
    ScenarioSet s;
    const std::size_t n = base_solar.size();
    s.prob.assign(n_scen, 1.0 / n_scen);
    for (int w = 0; w < n_scen; ++w) {
        Rng r = root.split(static_cast<std::uint64_t>(w));
        std::vector<double> pv(n), temp(n);
        for (std::size_t t = 0; t < n; ++t)
            pv[t] = std::max(0.0, base_solar[t] * (1.0 + r.uniform(-opt.solar_noise, opt.solar_noise)));
        const double shift = r.uniform(-opt.temp_shift, opt.temp_shift);
        for (std::size_t t = 0; t < n; ++t)
            temp[t] = base_temp[t] * (1.0 + r.uniform(-opt.temp_noise, opt.temp_noise)) + shift;
        s.pv_cap.push_back(std::move(pv));
        s.temp_amb.push_back(std::move(temp));
    }
    return s;
}

std::vector<double> synthetic_solar(const TimeGrid& grid, double peak_kw, double sunrise, double sunset) {
    std::vector<double> out(grid.n_steps, 0.0);
    for (int t = 0; t < grid.n_steps; ++t) {
        const double h = grid.hour_of(t) + 0.5 * grid.dt;
        if (h <= sunrise || h >= sunset) continue;
        const double x = std::sin(std::numbers::pi * (h - sunrise) / (sunset - sunrise));
        out[t] = peak_kw * std::pow(x, 1.5);
    }
    return out;
}

std::vector<double> synthetic_temperature(const TimeGrid& grid, double t_min, double t_max) {
    std::vector<double> out(grid.n_steps);
    const double mid = 0.5 * (t_min + t_max), amp = 0.5 * (t_max - t_min);
    for (int t = 0; t < grid.n_steps; ++t) {
        const double h = grid.hour_of(t) + 0.5 * grid.dt;
        // Rises from the 6:00 minimum to the 15:00 maximum, falls back over the night.
        double phase;
        if (h >= 6.0 && h <= 15.0) phase = (h - 6.0) / 9.0;
        else phase = 1.0 - std::fmod(h - 15.0 + 24.0, 24.0) / 15.0;
        out[t] = mid - amp * std::cos(std::numbers::pi * phase);
    }
    return out;
}

void scale_solar(std::vector<double>& solar, const std::vector<VehicleSpec>& fleet, double fraction, bool allow_up) {
    double cap = 0.0;
    for (const auto& v : fleet) cap += v.p_max;
    const double peak = solar.empty() ? 0.0 : *std::max_element(solar.begin(), solar.end());
    if (!(peak > 0.0)) return;
    const double factor = fraction * cap / peak;
    if (factor < 1.0 || allow_up)
        for (double& x : solar) x *= factor;
}

// ---- CSV ingestion -----------------------------------------------------------

namespace {

long days_from_civil(long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

// Minutes since 1970-01-01 for "YYYY-MM-DD[T ]HH:MM[:SS]" or minutes since
// midnight for a bare "HH:MM[:SS]". Returns false on malformed input.
bool parse_timestamp(const std::string& s, double& minutes) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0;
    double sec = 0.0;
    char sep = 0;
    long day = 0;
    std::string time = s;
    if (s.size() >= 10 && s[4] == '-' && s[7] == '-') {
        if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &mo, &d, &sep) < 3) return false;
        if (mo < 1 || mo > 12 || d < 1 || d > 31) return false;
        day = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
        if (s.size() == 10) {
            minutes = day * 1440.0;
            return true;
        }
        if (s[10] != 'T' && s[10] != ' ') return false;
        time = s.substr(11);
    }
    const int got = std::sscanf(time.c_str(), "%d:%d:%lf", &h, &mi, &sec);
    if (got < 2 || h < 0 || h > 24 || mi < 0 || mi > 59 || sec < 0.0 || sec >= 61.0) return false;
    minutes = day * 1440.0 + h * 60.0 + mi + sec / 60.0;
    return true;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> load_timeseries(const std::filesystem::path& path, SeriesKind kind, const TimeGrid& grid) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open time series '" + path.string() + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    int row_no = 0;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::Parse, path.string() + " row " + std::to_string(row_no) + ": expected 'timestamp,value'");
        const std::string ts = trim(line.substr(0, comma));
        const std::string val = trim(line.substr(comma + 1));
        double minutes = 0.0;
        if (!parse_timestamp(ts, minutes)) {
            if (rows.empty() && row_no == 1) continue;  // header
            throw Error(ErrorCode::Parse,
                        path.string() + " row " + std::to_string(row_no) + ": bad timestamp '" + ts + "'");
        }
        double v = 0.0;
        std::size_t used = 0;
        try {
            v = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != val.size() || !std::isfinite(v))
            throw Error(ErrorCode::Parse,
                        path.string() + " row " + std::to_string(row_no) + ": non-numeric value '" + val + "'");
        if (kind == SeriesKind::Solar && v < 0.0)
            throw Error(ErrorCode::Parse, path.string() + " row " + std::to_string(row_no) + ": negative solar value");
        if (kind == SeriesKind::Price && !(v > 0.0))
            throw Error(ErrorCode::Parse, path.string() + " row " + std::to_string(row_no) + ": price must be positive");
        rows.emplace_back(minutes, v);
    }
    if (rows.empty()) throw Error(ErrorCode::Parse, path.string() + ": no data rows");
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    const double day0 = std::floor(rows.front().first / 1440.0) * 1440.0;
    const double start = day0 + grid.start_hour * 60.0;
    const double step = grid.dt * 60.0;
    const double last_step = start + (grid.n_steps - 1) * step;
    const double spacing = rows.size() > 1 ? rows.back().first - rows[rows.size() - 2].first : step;
    if (rows.front().first > start + 1e-6 || rows.back().first + spacing <= last_step + 1e-6)
        throw Error(ErrorCode::Parse, path.string() + ": horizon not covered");

    std::vector<double> out(grid.n_steps);
    std::size_t k = 0;
    double last = rows.front().second;
    for (int t = 0; t < grid.n_steps; ++t) {
        const double lo = start + t * step, hi = lo + step;
        while (k < rows.size() && rows[k].first < lo - 1e-6) last = rows[k++].second;
        double sum = 0.0;
        int cnt = 0;
        while (k < rows.size() && rows[k].first < hi - 1e-6) {
            sum += rows[k].second;
            last = rows[k++].second;
            ++cnt;
        }
        out[t] = cnt > 0 ? sum / cnt : last;
    }
    return out;
}

}  // namespace tcsc
