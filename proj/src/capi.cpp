#include "beamalign/beamalign.h"

#include <cstring>
#include <new>
#include <string>

#include "beamalign/config.hpp"
#include "beamalign/detection.hpp"
#include "beamalign/error.hpp"
#include "beamalign/experiments.hpp"
#include "beamalign/planner.hpp"

struct ba_config {
  ba::Config cfg;
};

struct ba_schedule {
  ba::Schedule s;
};

namespace {

thread_local std::string g_error;

ba_status code_of(ba::ErrorKind k) {
  switch (k) {
    case ba::ErrorKind::Domain: return BA_ERR_DOMAIN;
    case ba::ErrorKind::Infeasible: return BA_ERR_INFEASIBLE;
    case ba::ErrorKind::Protocol: return BA_ERR_PROTOCOL;
    case ba::ErrorKind::Parse: return BA_ERR_PARSE;
    case ba::ErrorKind::Io: return BA_ERR_IO;
  }
  return BA_ERR_INTERNAL;
}

template <typename F>
ba_status guarded(F&& f) {
  try {
    f();
    g_error.clear();
    return BA_OK;
  } catch (const ba::Error& e) {
    g_error = e.what();
    return code_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return BA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return BA_ERR_INTERNAL;
  }
}

ba_status invalid(const char* what) {
  g_error = what;
  return BA_ERR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* ba_last_error(void) { return g_error.c_str(); }

const char* ba_status_string(ba_status s) {
  switch (s) {
    case BA_OK: return "ok";
    case BA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BA_ERR_DOMAIN: return "domain error";
    case BA_ERR_INFEASIBLE: return "infeasible";
    case BA_ERR_PROTOCOL: return "protocol error";
    case BA_ERR_PARSE: return "parse error";
    case BA_ERR_IO: return "i/o error";
    case BA_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

ba_status ba_config_create(ba_config** out) {
  if (!out) return invalid("ba_config_create: out is NULL");
  return guarded([&] { *out = new ba_config(); });
}

void ba_config_destroy(ba_config* cfg) { delete cfg; }

ba_status ba_config_load(ba_config* cfg, const char* path) {
  if (!cfg || !path) return invalid("ba_config_load: NULL argument");
  return guarded([&] {
    ba::Config trial = cfg->cfg;
    trial.load(path);
    cfg->cfg = std::move(trial);
  });
}

ba_status ba_config_parse(ba_config* cfg, const char* text) {
  if (!cfg || !text) return invalid("ba_config_parse: NULL argument");
  return guarded([&] {
    ba::Config trial = cfg->cfg;
    trial.parse(text);
    cfg->cfg = std::move(trial);
  });
}

ba_status ba_config_set(ba_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return invalid("ba_config_set: NULL argument");
  return guarded([&] {
    ba::Config trial = cfg->cfg;
    trial.set(key, value);
    trial.resolve();
    cfg->cfg = std::move(trial);
  });
}

ba_status ba_config_dump(const ba_config* cfg, char** out) {
  if (!cfg || !out) return invalid("ba_config_dump: NULL argument");
  return guarded([&] { *out = dup(cfg->cfg.dump()); });
}

ba_status ba_plan(const ba_config* cfg, ba_schedule** out) {
  if (!cfg || !out) return invalid("ba_plan: NULL argument");
  return guarded([&] {
    ba::ExperimentConfig e = cfg->cfg.resolve();
    ba::SimContext c = ba::prepare(e.sim);
    *out = new ba_schedule{c.schedule};
  });
}

void ba_schedule_destroy(ba_schedule* s) { delete s; }

int ba_schedule_alignment_slots(const ba_schedule* s) { return s ? s->s.L_star : -1; }

double ba_schedule_rho(const ba_schedule* s, int k) {
  if (!s || k < 0 || k >= s->s.L_star) return -1.0;
  return s->s.rho[k];
}

double ba_schedule_theta(const ba_schedule* s) { return s ? s->s.theta : -1.0; }

double ba_schedule_data_rate(const ba_schedule* s) { return s ? s->s.rate_dc : -1.0; }

double ba_schedule_power_w(const ba_schedule* s) { return s ? s->s.power : -1.0; }

ba_status ba_schedule_error_analysis(const ba_schedule* s, double p_fa, double p_md, double* power_w,
                                     double* throughput_bps) {
  if (!s || !power_w || !throughput_bps) return invalid("ba_schedule_error_analysis: NULL argument");
  return guarded([&] {
    ba::ErrorAnalysis e = ba::error_recursions(s->s, p_fa, p_md);
    *power_w = e.power;
    *throughput_bps = e.throughput;
  });
}

ba_status ba_plan_report(const ba_config* cfg, char** out) {
  if (!cfg || !out) return invalid("ba_plan_report: NULL argument");
  return guarded([&] { *out = dup(ba::plan_report(cfg->cfg.resolve())); });
}

ba_status ba_sweep_pe(const ba_config* cfg, char** out) {
  if (!cfg || !out) return invalid("ba_sweep_pe: NULL argument");
  return guarded([&] { *out = dup(ba::sweep_pe_csv(cfg->cfg.resolve())); });
}

ba_status ba_compare(const ba_config* cfg, char** out) {
  if (!cfg || !out) return invalid("ba_compare: NULL argument");
  return guarded([&] { *out = dup(ba::compare_csv(cfg->cfg.resolve())); });
}

ba_status ba_multicluster(const ba_config* cfg, char** out) {
  if (!cfg || !out) return invalid("ba_multicluster: NULL argument");
  return guarded([&] { *out = dup(ba::multicluster_csv(cfg->cfg.resolve())); });
}

ba_status ba_simulate(const ba_config* cfg, char** report, char** per_trial_csv) {
  if (!cfg || !report) return invalid("ba_simulate: NULL argument");
  return guarded([&] {
    std::string rows;
    std::string r = ba::simulate_report(cfg->cfg.resolve(), per_trial_csv ? &rows : nullptr);
    char* a = dup(r);
    if (per_trial_csv) {
      try {
        *per_trial_csv = dup(rows);
      } catch (...) {
        delete[] a;
        throw;
      }
    }
    *report = a;
  });
}

void ba_string_free(char* s) { delete[] s; }

double ba_marcum_q1(double a, double b) {
  try {
    return ba::marcum_q1(a, b);
  } catch (const std::exception& e) {
    g_error = e.what();
    return -1.0;
  }
}

ba_status ba_solve_nu_star(double p_e, double gain_est, double error_var, double symbol_energy, double* out) {
  if (!out) return invalid("ba_solve_nu_star: out is NULL");
  return guarded([&] { *out = ba::solve_nu_star(p_e, gain_est, error_var, symbol_energy); });
}

}  // extern "C"
