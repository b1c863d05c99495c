#ifndef BEAMALIGN_H
#define BEAMALIGN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BA_API __declspec(dllexport)
#else
#define BA_API __attribute__((visibility("default")))
#endif

typedef enum {
  BA_OK = 0,
  BA_ERR_INVALID_ARGUMENT = 1,
  BA_ERR_DOMAIN = 2,
  BA_ERR_INFEASIBLE = 3,
  BA_ERR_PROTOCOL = 4,
  BA_ERR_PARSE = 5,
  BA_ERR_IO = 6,
  BA_ERR_INTERNAL = 7
} ba_status;

typedef struct ba_config ba_config;
typedef struct ba_schedule ba_schedule;

/* message for the last failing call on this thread; never NULL */
BA_API const char* ba_last_error(void);
BA_API const char* ba_status_string(ba_status s);

BA_API ba_status ba_config_create(ba_config** out);
BA_API void ba_config_destroy(ba_config* cfg);
BA_API ba_status ba_config_load(ba_config* cfg, const char* path);
BA_API ba_status ba_config_parse(ba_config* cfg, const char* text);
BA_API ba_status ba_config_set(ba_config* cfg, const char* key, const char* value);
/* resolved configuration as key = value text; release with ba_string_free */
BA_API ba_status ba_config_dump(const ba_config* cfg, char** out);

BA_API ba_status ba_plan(const ba_config* cfg, ba_schedule** out);
BA_API void ba_schedule_destroy(ba_schedule* s);
/* scalar accessors return -1 for a NULL handle or an index outside [0, L*) */
BA_API int ba_schedule_alignment_slots(const ba_schedule* s);
BA_API double ba_schedule_rho(const ba_schedule* s, int k);
BA_API double ba_schedule_theta(const ba_schedule* s);
BA_API double ba_schedule_data_rate(const ba_schedule* s);
BA_API double ba_schedule_power_w(const ba_schedule* s);
BA_API ba_status ba_schedule_error_analysis(const ba_schedule* s, double p_fa, double p_md, double* power_w,
                                            double* throughput_bps);

/* text and CSV producers; each result is heap-allocated, release with ba_string_free */
BA_API ba_status ba_plan_report(const ba_config* cfg, char** out);
BA_API ba_status ba_sweep_pe(const ba_config* cfg, char** out);
BA_API ba_status ba_compare(const ba_config* cfg, char** out);
BA_API ba_status ba_multicluster(const ba_config* cfg, char** out);
/* per_trial_csv may be NULL */
BA_API ba_status ba_simulate(const ba_config* cfg, char** report, char** per_trial_csv);
BA_API void ba_string_free(char* s);

/* -1 on a domain error, with the message in ba_last_error */
BA_API double ba_marcum_q1(double a, double b);
BA_API ba_status ba_solve_nu_star(double p_e, double gain_est, double error_var, double symbol_energy,
                                  double* out);

#ifdef __cplusplus
}
#endif

#endif
