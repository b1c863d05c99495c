#include "beamalign/outage.hpp"

#include <cmath>

#include "beamalign/detection.hpp"
#include "beamalign/error.hpp"

namespace ba {

double ccdf_gamma(double x, double gain_est, double error_var) {
  if (x <= 0.0) return 1.0;
  if (error_var == 0.0) return x <= gain_est ? 1.0 : 0.0;
  return marcum_q1(std::sqrt(2.0 * gain_est / error_var), std::sqrt(2.0 * x / error_var));
}

double inv_ccdf_gamma(double q, double gain_est, double error_var) {
  if (!(q > 0.0)) fail(ErrorKind::Domain, "inv_ccdf_gamma: q must be positive");
  if (error_var == 0.0) return gain_est;
  if (q >= 1.0) return 0.0;
  if (gain_est == 0.0) return -error_var * std::log(q);
  double lo = 0.0;
  double hi = gain_est + error_var;
  while (ccdf_gamma(hi, gain_est, error_var) >= q) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (ccdf_gamma(mid, gain_est, error_var) >= q) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

QStar q_star_and_theta(double eps, double gain_est, double error_var) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Domain, "q_star: eps outside (0,1)");
  auto obj = [&](double q) { return q * inv_ccdf_gamma(q, gain_est, error_var); };
  double lo = 1.0 - eps;
  int n = std::max(1, static_cast<int>(std::ceil(eps / 1e-4)));
  double step = eps / n;
  int best_i = 0;
  double best = obj(lo);
  for (int i = 1; i <= n; ++i) {
    double v = obj(lo + i * step);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double q_best = lo + best_i * step;
  double a = std::max(lo, q_best - step);
  double b = std::min(1.0, q_best + step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = obj(c), fd = obj(d);
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = obj(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = obj(d);
    }
  }
  double q_ref = 0.5 * (a + b);
  double f_ref = obj(q_ref);
  if (f_ref > best) {
    best = f_ref;
    q_best = q_ref;
  }
  return {q_best, (1.0 - eps) / q_best};
}

double psi_d(double rate, double duration, const SystemParams& p) {
  return p.noise_psd * p.bandwidth * duration * std::expm1(rate / p.bandwidth * std::log(2.0)) /
         (4.0 * kPi * kPi);
}

double psi_d(double rate, const SystemParams& p) { return psi_d(rate, p.slot_duration(), p); }

double OutageDesign::gain_quantile(double align_prob) const {
  double q = (1.0 - eps) / align_prob;
  if (q > 1.0 + 1e-12)
    fail(ErrorKind::Infeasible, "alignment probability below 1 - eps cannot meet the outage target");
  return inv_ccdf_gamma(std::min(q, 1.0), gain_est, error_var);
}

OutageDesign make_outage_design(const SystemParams& p) {
  OutageDesign o;
  o.eps = p.outage_eps;
  o.gain_est = p.csi_gain();
  o.error_var = p.csi_variance();
  QStar qs = q_star_and_theta(o.eps, o.gain_est, o.error_var);
  o.q_star = qs.q_star;
  o.theta = qs.theta;
  o.denom = qs.q_star * inv_ccdf_gamma(qs.q_star, o.gain_est, o.error_var);
  if (!(o.denom > 0.0)) fail(ErrorKind::Infeasible, "outage design: zero gain quantile");
  return o;
}

double phi_d(double rate, double duration, const OutageDesign& o, const SystemParams& p) {
  return psi_d(rate, duration, p) * (1.0 - o.eps) / o.denom;
}

double phi_d(double rate, const OutageDesign& o, const SystemParams& p) {
  return phi_d(rate, p.slot_duration(), o, p);
}

double data_energy(double rate, double duration, double beam_measure_2d, double align_prob,
                   const OutageDesign& o, const SystemParams& p) {
  if (rate == 0.0) return 0.0;
  return psi_d(rate, duration, p) * beam_measure_2d / o.gain_quantile(align_prob);
}

double outage_capacity(double power, double beam_measure_2d, double align_prob, const OutageDesign& o,
                       const SystemParams& p) {
  double x = o.gain_quantile(align_prob);
  double nu = beamforming_factor(power, beam_measure_2d, p);
  return p.bandwidth * std::log2(1.0 + nu * x);
}

}  // namespace ba
