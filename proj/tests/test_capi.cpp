#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "beamalign/beamalign.h"

namespace {

struct Cfg {
  ba_config* p = nullptr;
  Cfg() { REQUIRE(ba_config_create(&p) == BA_OK); }
  ~Cfg() { ba_config_destroy(p); }
};

std::string take(char* s) {
  std::string r = s ? s : "";
  ba_string_free(s);
  return r;
}

}  // namespace

TEST_CASE("null handling") {
  CHECK(ba_config_create(nullptr) == BA_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(ba_last_error()) > 0);
  CHECK(ba_plan(nullptr, nullptr) == BA_ERR_INVALID_ARGUMENT);
  ba_config_destroy(nullptr);
  ba_schedule_destroy(nullptr);
  ba_string_free(nullptr);
  CHECK(std::string(ba_status_string(BA_ERR_INFEASIBLE)).size() > 0);
}

TEST_CASE("config errors map to codes") {
  Cfg c;
  CHECK(ba_config_set(c.p, "beam_width", "3") == BA_ERR_PARSE);
  CHECK(std::string(ba_last_error()).find("beam_width") != std::string::npos);
  CHECK(ba_config_set(c.p, "p_e", "0.9") != BA_OK);
  // a rejected value leaves the configuration untouched
  char* dump = nullptr;
  REQUIRE(ba_config_dump(c.p, &dump) == BA_OK);
  CHECK(take(dump).find("p_e = 1e-5") != std::string::npos);
  CHECK(ba_config_load(c.p, "/nonexistent.cfg") == BA_ERR_IO);
  CHECK(ba_config_parse(c.p, "slots = x\n") == BA_ERR_PARSE);
  CHECK(ba_config_parse(c.p, "rate_min_bps = 1e9\nbeam_width = 2\n") == BA_ERR_PARSE);
  REQUIRE(ba_config_dump(c.p, &dump) == BA_OK);
  CHECK(take(dump).find("rate_min_bps = 7.5e9") != std::string::npos);
}

TEST_CASE("plan through the C API") {
  Cfg c;
  ba_schedule* s = nullptr;
  REQUIRE(ba_plan(c.p, &s) == BA_OK);
  int L = ba_schedule_alignment_slots(s);
  CHECK(L == 14);
  for (int k = 1; k < L; ++k) CHECK(ba_schedule_rho(s, k) >= ba_schedule_rho(s, k - 1));
  CHECK(ba_schedule_rho(s, L) == -1.0);
  CHECK(ba_schedule_theta(s) == doctest::Approx(1.0));
  CHECK(ba_schedule_data_rate(s) == doctest::Approx(200 * 7.5e9 / (200 - L)));
  double pw = ba_schedule_power_w(s);
  CHECK(pw > 0);
  double ep = 0, et = 0;
  CHECK(ba_schedule_error_analysis(s, 0.0, 0.0, &ep, &et) == BA_OK);
  CHECK(ep == doctest::Approx(pw).epsilon(1e-12));
  CHECK(et == doctest::Approx(0.99 * 7.5e9));
  CHECK(ba_schedule_error_analysis(s, 1.5, 0.0, &ep, &et) == BA_ERR_DOMAIN);
  ba_schedule_destroy(s);
}

TEST_CASE("plan report") {
  Cfg c;
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(ba_plan_report(c.p, &a) == BA_OK);
  REQUIRE(ba_plan_report(c.p, &b) == BA_OK);
  std::string ra = take(a), rb = take(b);
  CHECK(ra == rb);
  CHECK(ra.find("rho_increasing_check = PASS") != std::string::npos);

  CHECK(ba_config_set(c.p, "rate_min_bps", "0") == BA_OK);
  REQUIRE(ba_plan_report(c.p, &a) == BA_OK);
  std::string z = take(a);
  CHECK(z.find("L_star = 0") != std::string::npos);
  CHECK(z.find("0 W") != std::string::npos);
}

TEST_CASE("sweep-pe CSV header") {
  Cfg c;
  REQUIRE(ba_config_set(c.p, "sweep_points", "3") == BA_OK);
  REQUIRE(ba_config_set(c.p, "se_list", "8") == BA_OK);
  char* out = nullptr;
  REQUIRE(ba_sweep_pe(c.p, &out) == BA_OK);
  std::string csv = take(out);
  CHECK(csv.rfind("pe,rmin_bps,power_dBm,thr_bps\n", 0) == 0);
  int lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 4);
}

TEST_CASE("simulate with per-trial rows") {
  Cfg c;
  REQUIRE(ba_config_set(c.p, "trials", "50") == BA_OK);
  char* rep = nullptr;
  char* rows = nullptr;
  REQUIRE(ba_simulate(c.p, &rep, &rows) == BA_OK);
  CHECK(take(rep).size() > 0);
  std::string csv = take(rows);
  CHECK(csv.rfind("trial,policy,energy_J,bits,aligned,e_flag,L_used\n", 0) == 0);
  REQUIRE(ba_simulate(c.p, &rep, nullptr) == BA_OK);
  ba_string_free(rep);
}

TEST_CASE("numerics") {
  CHECK(ba_marcum_q1(0.0, std::sqrt(2.0)) == doctest::Approx(std::exp(-1.0)));
  CHECK(ba_marcum_q1(-1.0, 1.0) == -1.0);
  double nu = 0;
  CHECK(ba_solve_nu_star(1e-5, 0.0, 1.0, 1.0, &nu) == BA_OK);
  CHECK(nu == doctest::Approx(11.512925464970229 / -std::log1p(-1e-5) - 1.0).epsilon(1e-10));
  CHECK(ba_solve_nu_star(0.6, 0.0, 1.0, 1.0, &nu) == BA_ERR_INFEASIBLE);
  CHECK(ba_solve_nu_star(1e-5, 0.0, 1.0, 1.0, nullptr) == BA_ERR_INVALID_ARGUMENT);
}
