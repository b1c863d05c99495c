#include "beamalign/planner.hpp"

#include <cmath>
#include <limits>

#include "beamalign/error.hpp"

namespace ba {

PlanInputs make_plan_inputs(const SystemParams& p, double phi_s) {
  return {p, make_outage_design(p), phi_s};
}

double dc_value(int L, const PlanInputs& in) {
  int n = in.params.slots;
  if (L < 0 || L >= n) fail(ErrorKind::Domain, "dc_value: L must lie in [0, N)");
  if (in.params.rate_min == 0.0) return 0.0;
  double rate = n * in.params.rate_min / (n - L);
  return (n - L) * phi_d(rate, in.outage, in.params);
}

std::vector<double> v_recursion(int L, const PlanInputs& in) {
  std::vector<double> v(L + 1);
  v[L] = dc_value(L, in);
  double ps = in.phi_s;
  for (int k = L - 1; k >= 0; --k) {
    double next = v[k + 1];
    if (next <= ps / 2.0 || std::isinf(next)) {
      v[k] = next;
    } else {
      double d = 2.0 * next - ps;
      v[k] = next - d * (d / (8.0 * next));
    }
  }
  return v;
}

std::optional<int> l_min(const PlanInputs& in) {
  for (int L = 0; L < in.params.slots; ++L)
    if (dc_value(L, in) > in.phi_s / 2.0) return L;
  return std::nullopt;
}

RhoSchedule rho_schedule(int L, double phi_s, double v_last) {
  RhoSchedule r;
  if (L <= 0) return r;
  r.rho.resize(L);
  r.gap.resize(L);
  r.gap[L - 1] = phi_s / (4.0 * v_last);
  for (int k = L - 2; k >= 0; --k) {
    double g = r.gap[k + 1];
    r.gap[k] = 2.0 * g / (1.0 + 4.0 * g - 4.0 * g * g);
  }
  // rho itself drifts when iterated from just below 1/2
  for (int k = 0; k < L; ++k) r.rho[k] = 0.5 - r.gap[k];
  return r;
}

Schedule optimize_L(const PlanInputs& in) {
  const SystemParams& p = in.params;
  Schedule s;
  s.slots = p.slots;
  s.rate_min = p.rate_min;
  s.eps = p.outage_eps;
  s.phi_s = in.phi_s;
  s.theta = in.outage.theta;
  s.support_measure = p.support_measure();
  s.frame_duration = p.frame_duration;
  s.slot_duration = p.slot_duration();
  s.L_min = l_min(in);

  std::vector<int> candidates{0};
  if (s.L_min) {
    int top = std::min(p.slots - 1, p.l_max);
    for (int L = std::max(1, *s.L_min); L <= top; ++L) candidates.push_back(L);
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_v;
  int best_L = -1;
  for (int L : candidates) {
    auto v = v_recursion(L, in);
    if (v[0] < best) {
      best = v[0];
      best_v = std::move(v);
      best_L = L;
    }
  }
  if (best_L < 0 || !std::isfinite(best))
    fail(ErrorKind::Infeasible, "no finite-energy schedule: required data rate is not representable");
  s.L_star = best_L;
  s.v = std::move(best_v);
  s.rate_dc = p.slots * p.rate_min / (p.slots - best_L);
  auto r = rho_schedule(best_L, in.phi_s, s.v.back());
  s.rho = std::move(r.rho);
  s.rho_gap = std::move(r.gap);
  s.power = s.v[0] * s.support_measure / p.frame_duration;
  return s;
}

ErrorAnalysis error_recursions(const Schedule& s, double pfa, double pmd) {
  if (!(pfa >= 0.0 && pfa < 1.0 && pmd >= 0.0 && pmd < 1.0))
    fail(ErrorKind::Domain, "error_recursions: probabilities must lie in [0,1)");
  int L = s.L_star;
  ErrorAnalysis e;
  e.p_fa = pfa;
  e.p_md = pmd;
  e.h.assign(L + 1, 0.0);
  e.u.assign(L + 1, 0.0);
  double ps = s.phi_s;
  double keep = 1.0;
  for (int k = L - 1; k >= 0; --k) {
    double r = s.rho[k];
    double hn = e.h[k + 1];
    e.h[k] = ps * (r - pfa) / 2.0 + (r * pfa + (1.0 - r) * (1.0 - pfa)) * hn;
    e.u[k] = (r * r * (1.0 - pmd) + (1.0 - r) * (1.0 - r) * (1.0 - pfa)) * e.u[k + 1] -
             (1.0 - pfa - pmd) * r * (ps / 2.0 + hn * (1.0 - 2.0 * r));
    keep *= (1.0 - r) * (1.0 - pfa) + r * (1.0 - pmd);
  }
  e.throughput = (1.0 - s.eps) * s.rate_min * keep;
  e.power = s.power + (e.h[0] + e.u[0]) * s.support_measure / s.frame_duration;
  return e;
}

}  // namespace ba
