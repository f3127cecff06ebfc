/* C interface to the station scheduler. All functions return a tcsc_status;
 * on failure tcsc_last_error() describes the problem (per thread). */
#ifndef TCSC_H
#define TCSC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TCSC_BUILDING)
#    define TCSC_API __declspec(dllexport)
#  else
#    define TCSC_API __declspec(dllimport)
#  endif
#else
#  define TCSC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tcsc_status {
    TCSC_OK = 0,
    TCSC_ERR_USAGE = 2,
    TCSC_ERR_INFEASIBLE = 3,
    TCSC_ERR_TIMEOUT = 4,
    TCSC_ERR_IO = 5,
    TCSC_ERR_PARSE = 6,
    TCSC_ERR_INVALID = 7,
    TCSC_ERR_INTERNAL = 8
} tcsc_status;

typedef struct tcsc_instance tcsc_instance;
typedef struct tcsc_schedule tcsc_schedule;

typedef struct tcsc_metrics {
    double unmet_soc;         /* p.u. */
    double charging_cost;     /* cents/kWh, valid when has_charging_cost */
    int has_charging_cost;
    double overhead_rate;     /* % */
    double solar_usage_rate;  /* % */
    double expected_cost;     /* cents */
    double wall_time;         /* s */
} tcsc_metrics;

/* Values left negative keep the config's setting. */
typedef struct tcsc_overrides {
    int64_t seed;
    double time_limit_per_vehicle;
    double gap_tol;
} tcsc_overrides;

TCSC_API const char* tcsc_version(void);
TCSC_API const char* tcsc_last_error(void);
TCSC_API void tcsc_overrides_init(tcsc_overrides* o);

/* instances */
TCSC_API tcsc_status tcsc_instance_load(const char* config_path, const tcsc_overrides* o, tcsc_instance** out);
TCSC_API tcsc_status tcsc_instance_parse(const char* config_json, const char* base_dir, const tcsc_overrides* o,
                                         tcsc_instance** out);
TCSC_API void tcsc_instance_free(tcsc_instance* inst);
TCSC_API int tcsc_instance_vehicles(const tcsc_instance* inst);
TCSC_API int tcsc_instance_steps(const tcsc_instance* inst);
TCSC_API int tcsc_instance_scenarios(const tcsc_instance* inst);

/* schedules; scheme is one of tcsc-central, tcsc-decent, smart-chg-heat,
 * instant-chg-heat, no-heat */
TCSC_API tcsc_status tcsc_solve(const tcsc_instance* inst, const char* scheme, tcsc_schedule** out);
TCSC_API void tcsc_schedule_free(tcsc_schedule* sch);
TCSC_API tcsc_status tcsc_schedule_metrics(const tcsc_schedule* sch, tcsc_metrics* out);
/* Copies n_steps values of one vehicle's powers in one scenario. */
TCSC_API tcsc_status tcsc_schedule_powers(const tcsc_schedule* sch, int scenario, int vehicle, double* p_chg,
                                          double* p_heat, size_t len);
TCSC_API tcsc_status tcsc_schedule_write_json(const tcsc_schedule* sch, const char* path);

/* experiment drivers; outputs go to out_dir (created when missing).
 * Single-file outputs accept "-" for standard output. */
TCSC_API tcsc_status tcsc_cmd_compare(const char* config_path, const char* schemes, const char* out_dir,
                                      const tcsc_overrides* o);
TCSC_API tcsc_status tcsc_cmd_sweep(const char* config_path, const double* shifts, size_t n_shifts,
                                    const char* schemes, const char* out_dir, const tcsc_overrides* o);
TCSC_API tcsc_status tcsc_cmd_scale(const char* config_path, const int* sizes, size_t n_sizes, const int* scen_counts,
                                    size_t n_scen, const char* out_dir, const tcsc_overrides* o);
TCSC_API tcsc_status tcsc_cmd_gen_config(const char* path, int vehicles, int scenarios, int64_t seed);
/* full != 0 writes the per-scenario temperature formulation */
TCSC_API tcsc_status tcsc_cmd_dump_lp(const char* config_path, const char* path, int full, const tcsc_overrides* o);

#ifdef __cplusplus
}
#endif

#endif
