#pragma once

#include "beamalign/phy.hpp"

namespace ba {

double ccdf_gamma(double x, double gain_est, double error_var);
double inv_ccdf_gamma(double q, double gain_est, double error_var);

struct QStar {
  double q_star;
  double theta;
};

QStar q_star_and_theta(double eps, double gain_est, double error_var);

// (2 pi)^-2 N0 W tau (2^{R/W} - 1): energy/rad^2 for rate R over a duration tau
double psi_d(double rate, double duration, const SystemParams& p);
double psi_d(double rate, const SystemParams& p);

struct OutageDesign {
  double eps = 0.0;
  double gain_est = 0.0;
  double error_var = 0.0;
  double q_star = 1.0;
  double theta = 1.0;
  double denom = 0.0;  // q* F^-1(q*)

  // required gain quantile when the beam holds the angle with probability align_prob
  double gain_quantile(double align_prob) const;
};

OutageDesign make_outage_design(const SystemParams& p);

double phi_d(double rate, double duration, const OutageDesign& o, const SystemParams& p);
double phi_d(double rate, const OutageDesign& o, const SystemParams& p);

// E = psi_d(R)|B| / F^-1((1-eps)/align_prob)
double data_energy(double rate, double duration, double beam_measure_2d, double align_prob,
                   const OutageDesign& o, const SystemParams& p);

double outage_capacity(double power, double beam_measure_2d, double align_prob, const OutageDesign& o,
                       const SystemParams& p);

}  // namespace ba
