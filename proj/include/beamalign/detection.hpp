#pragma once

#include "beamalign/phy.hpp"

namespace ba {

double threshold(double p_e);
double p_fa(double tau);

struct MarcumQ {
  double q;   // Q1(a, b)
  double qc;  // 1 - Q1(a, b), computed without cancellation
};

MarcumQ marcum_q1_pair(double a, double b);
double marcum_q1(double a, double b);

double p_md(double nu, double tau, double gain_est, double error_var, double symbol_energy);

double solve_nu_star(double p_e, double gain_est, double error_var, double symbol_energy);

struct DetectionDesign {
  double p_e = 0.0;
  double tau = 0.0;
  double nu_star = 0.0;
  double symbol_energy = 0.0;
  double symbol_duration = 0.0;
  double phi_s = 0.0;  // J/rad^2
  double gain_est = 0.0;
  double error_var = 0.0;

  // nu * ||s||^2 delivered by a beacon of energy E over a 2D beam of measure m
  double beacon_snr_factor(double energy, double beam_measure_2d) const {
    return nu_star * symbol_energy * energy / (phi_s * beam_measure_2d);
  }
};

double phi_s_from_nu(double nu_star, const SystemParams& p);

// honours phi_s_override unless use_override is false
DetectionDesign make_detection_design(const SystemParams& p, bool use_override = true);

}  // namespace ba
