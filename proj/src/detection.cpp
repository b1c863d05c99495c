#include "beamalign/detection.hpp"

#include <algorithm>
#include <cmath>

#include "beamalign/error.hpp"

namespace ba {

double threshold(double p_e) {
  if (!(p_e > 0.0 && p_e < 1.0)) fail(ErrorKind::Domain, "threshold: p_e outside (0,1)");
  return -std::log(p_e);
}

double p_fa(double tau) { return std::exp(-tau); }

namespace {

double log_poisson(double k, double lambda) { return k * std::log(lambda) - lambda - std::lgamma(k + 1.0); }

struct Window {
  long lo, hi;
};

Window poisson_window(double lambda) {
  double spread = 12.0 * std::sqrt(lambda) + 30.0;
  return {std::max(0L, static_cast<long>(std::floor(lambda - spread))),
          static_cast<long>(std::ceil(lambda + spread))};
}

}  // namespace

// Q1(a,b) = P(M <= K) with K ~ Poisson(a^2/2), M ~ Poisson(b^2/2) independent.
// Both tails are summed separately over the windows where the Poisson masses live,
// so small values of either Q1 or 1 - Q1 keep full relative precision.
MarcumQ marcum_q1_pair(double a, double b) {
  if (!(a >= 0.0 && b >= 0.0)) fail(ErrorKind::Domain, "marcum_q1: negative argument");
  if (b == 0.0) return {1.0, 0.0};
  double y = 0.5 * b * b;
  if (a == 0.0) return {std::exp(-y), -std::expm1(-y)};
  double x = 0.5 * a * a;

  Window wx = poisson_window(x);
  Window wy = poisson_window(y);
  long n = wy.hi - wy.lo + 1;
  std::vector<double> pm(n), cdf(n), tail(n);
  for (long i = 0; i < n; ++i) pm[i] = std::exp(log_poisson(static_cast<double>(wy.lo + i), y));
  double acc = 0.0;
  for (long i = 0; i < n; ++i) cdf[i] = (acc += pm[i]);
  acc = 0.0;
  for (long i = n - 1; i >= 0; --i) {
    tail[i] = acc;
    acc += pm[i];
  }
  auto cdf_at = [&](long k) { return k < wy.lo ? 0.0 : (k > wy.hi ? 1.0 : cdf[k - wy.lo]); };
  auto tail_at = [&](long k) { return k < wy.lo ? 1.0 : (k > wy.hi ? 0.0 : tail[k - wy.lo]); };

  double q = 0.0, qc = 0.0;
  for (long k = wx.lo; k <= wx.hi; ++k) {
    double w = std::exp(log_poisson(static_cast<double>(k), x));
    if (w == 0.0) continue;
    q += w * cdf_at(k);
    qc += w * tail_at(k);
  }
  double s = q + qc;
  return {std::clamp(q / s, 0.0, 1.0), std::clamp(qc / s, 0.0, 1.0)};
}

double marcum_q1(double a, double b) { return marcum_q1_pair(a, b).q; }

double p_md(double nu, double tau, double gain_est, double error_var, double symbol_energy) {
  double den = 1.0 + nu * symbol_energy * error_var;
  double a = std::sqrt(2.0 * gain_est * nu * symbol_energy / den);
  double b = std::sqrt(2.0 * tau / den);
  return marcum_q1_pair(a, b).qc;
}

double solve_nu_star(double p_e, double gain_est, double error_var, double symbol_energy) {
  if (!(p_e > 0.0)) fail(ErrorKind::Domain, "solve_nu_star: p_e must be positive");
  if (p_e >= 0.5) fail(ErrorKind::Infeasible, "solve_nu_star: p_e >= 0.5 has no detector design");
  double tau = threshold(p_e);
  auto f = [&](double nu) { return p_md(nu, tau, gain_est, error_var, symbol_energy); };
  double lo = 1.0, hi = 1.0;
  if (f(hi) > p_e) {
    while (f(hi) > p_e) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) fail(ErrorKind::Infeasible, "solve_nu_star: misdetection target unreachable");
    }
  } else {
    while (f(lo) <= p_e) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return 0.0;
    }
  }
  for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-15; ++it) {
    double mid = std::sqrt(lo * hi);
    if (f(mid) > p_e) lo = mid; else hi = mid;
  }
  return hi;
}

double phi_s_from_nu(double nu_star, const SystemParams& p) {
  return p.noise_psd * p.bandwidth * nu_star * p.symbol_duration * p.symbol_energy / (4.0 * kPi * kPi);
}

DetectionDesign make_detection_design(const SystemParams& p, bool use_override) {
  DetectionDesign d;
  d.p_e = p.p_e;
  d.tau = threshold(p.p_e);
  d.gain_est = p.csi_gain();
  d.error_var = p.csi_variance();
  d.symbol_energy = p.symbol_energy;
  d.symbol_duration = p.symbol_duration;
  d.nu_star = solve_nu_star(p.p_e, d.gain_est, d.error_var, d.symbol_energy);
  d.phi_s = (use_override && p.phi_s_override) ? *p.phi_s_override : phi_s_from_nu(d.nu_star, p);
  return d;
}

}  // namespace ba
