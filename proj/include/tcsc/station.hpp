#pragma once

// Station domain: horizon, tariff, vehicles, thermal constants, scenarios.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcsc {

enum class ErrorCode { Usage = 2, Infeasible = 3, Timeout = 4, Io = 5, Parse = 6, Invalid = 7, Internal = 8 };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct TimeGrid {
    double start_hour = 7.0;
    int n_steps = 60;
    double dt = 0.25;  // hours

    double hour_of(int t) const { return start_hour + t * dt; }
    double end_hour() const { return start_hour + n_steps * dt; }
    void validate() const;
};

struct VehicleSpec {
    std::string id;
    double capacity = 37.0;    // kWh
    double mass = 235.88;      // kg
    double p_max = 7.4;        // kW, charging + heating
    double pc_bar = 4.8;       // kW, charge cap intercept
    double beta_chg = 0.12;    // kW/degC
    double ph_bar = 3.0;       // kW, heating cap intercept
    double beta_heat = 0.024;  // kW/degC
    double soc_arr = 0.2;
    double soc_dep = 0.9;
    double temp_arr = 5.0;  // degC
    int ta = 0;             // arrival step
    int td = 60;            // departure step (exclusive for powers)

    void validate(const TimeGrid& grid) const;
    bool parked(int t) const { return t >= ta && t < td; }
};

struct ThermalParams {
    double heat_capacity = 2.82e-4;  // kWh/(kg degC)
    double loss_hA = 0.0416;         // kW/degC
    double mu_heat = 0.4;
    double eta_heat = 0.8;
    double eta_chg = 0.92;
    double mu_chg = 0.22;  // kW/degC
    double T_lo = 0.0;
    double T_hi = 35.0;
    double T_set = 15.0;

    void validate() const;
};

struct Tariff {
    std::vector<double> price;  // cents/kWh per step
    void validate(int n_steps) const;
};

struct ScenarioSet {
    std::vector<double> prob;
    std::vector<std::vector<double>> pv_cap;    // [w][t] kW
    std::vector<std::vector<double>> temp_amb;  // [w][t] degC

    int size() const { return static_cast<int>(prob.size()); }
    void validate(int n_steps) const;
    /// min over scenarios of the solar cap at step t
    double min_pv(int t) const;
};

struct StationModel {
    TimeGrid grid;
    Tariff tariff;
    ThermalParams thermal;
    std::vector<VehicleSpec> fleet;
    double pg_max = 10.0;  // kW
    double big_M_T = 60.0;
    double big_M_P = 10.0;

    void validate() const;
    int n() const { return static_cast<int>(fleet.size()); }
};

/// SplitMix64 stream. uniform() uses the top 53 bits so sequences are
/// identical on every platform; split() derives independent child streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();  // [0, 1)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int lo, int hi);  // inclusive
    Rng split(std::uint64_t key) const;

private:
    std::uint64_t state_;
};

/// Time-of-use price: 12.48 before 8:00 and from 18:00, 17.22 in [8,12), 22.09 in [12,18).
Tariff build_tou_tariff(const TimeGrid& grid);
double tou_price(double hour);

struct FleetOptions {
    double arrival_lo = 7.0, arrival_hi = 9.0;      // hour of day
    double departure_lo = 16.0, departure_hi = 19.0;
    double temp_arr_lo = 0.0, temp_arr_hi = 5.0;    // degC
    double soc_arr_lo = 0.0, soc_arr_hi = 0.4;
    double soc_dep = 0.9;
    double fluctuation = 0.05;
};

std::vector<VehicleSpec> gen_fleet(int n, std::uint64_t seed, const TimeGrid& grid = {},
                                   const FleetOptions& opt = {});

struct ScenarioOptions {
    double solar_noise = 0.10;
    double temp_noise = 0.15;
    double temp_shift = 1.0;
};

ScenarioSet gen_scenarios(const std::vector<double>& base_solar, const std::vector<double>& base_temp,
                          int n_scen, std::uint64_t seed, const ScenarioOptions& opt = {});

enum class SeriesKind { Solar, Temperature, Price };

/// Reads a (timestamp, value) CSV and aligns it to the grid: rows inside a
/// step are averaged, steps without rows take the last earlier value.
std::vector<double> load_timeseries(const std::filesystem::path& path, SeriesKind kind, const TimeGrid& grid);

/// Smooth clear-sky style solar profile (kW), zero outside [sunrise, sunset].
std::vector<double> synthetic_solar(const TimeGrid& grid, double peak_kw, double sunrise = 6.75,
                                    double sunset = 16.25);
/// Diurnal temperature curve with minimum near 6:00 and maximum near 15:00.
std::vector<double> synthetic_temperature(const TimeGrid& grid, double t_min, double t_max);

/// Scales a profile so its maximum equals `fraction` of the fleet's connected capacity
/// (only scales down unless `allow_up`).
void scale_solar(std::vector<double>& solar, const std::vector<VehicleSpec>& fleet, double fraction,
                 bool allow_up = true);

}  // namespace tcsc
