#pragma once

#include <optional>
#include <vector>

#include "beamalign/outage.hpp"
#include "beamalign/phy.hpp"

namespace ba {

struct PlanInputs {
  SystemParams params;
  OutageDesign outage;
  double phi_s = 0.0;  // J/rad^2
};

struct Schedule {
  int L_star = 0;
  std::optional<int> L_min;
  std::vector<double> rho;      // rho_0 .. rho_{L*-1}
  std::vector<double> rho_gap;  // 1/2 - rho_k, carried separately so it keeps precision near 1/2
  double theta = 1.0;
  double rate_dc = 0.0;         // bit/s
  std::vector<double> v;        // v_0 .. v_{L*}, J/rad^2
  double power = 0.0;           // W
  double phi_s = 0.0;
  int slots = 0;
  double rate_min = 0.0;
  double eps = 0.0;
  double support_measure = 0.0;
  double frame_duration = 0.0;
  double slot_duration = 0.0;
};

struct ErrorAnalysis {
  std::vector<double> h;  // h_0 .. h_{L*}
  std::vector<double> u;  // u_0 .. u_{L*}
  double throughput = 0.0;  // bit/s
  double power = 0.0;       // W
  double p_fa = 0.0;
  double p_md = 0.0;
};

PlanInputs make_plan_inputs(const SystemParams& p, double phi_s);

double dc_value(int L, const PlanInputs& in);
std::vector<double> v_recursion(int L, const PlanInputs& in);
std::optional<int> l_min(const PlanInputs& in);

struct RhoSchedule {
  std::vector<double> rho;
  std::vector<double> gap;
};
RhoSchedule rho_schedule(int L, double phi_s, double v_last);

Schedule optimize_L(const PlanInputs& in);

ErrorAnalysis error_recursions(const Schedule& s, double p_fa, double p_md);

}  // namespace ba
