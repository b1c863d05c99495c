#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "beamalign/detection.hpp"
#include "beamalign/planner.hpp"
#include "beamalign/policies.hpp"

namespace ba {

enum class PolicyKind { Dfs, DfsNonuniform, Bisection, Ces, Ies };
enum class ErrorMode { None, Injected, Signal };

const char* policy_name(PolicyKind k);
PolicyKind parse_policy(const std::string& s);
const char* error_mode_name(ErrorMode m);
ErrorMode parse_error_mode(const std::string& s);

struct SimConfig {
  SystemParams params;
  PolicyKind policy = PolicyKind::Dfs;
  ErrorMode mode = ErrorMode::None;
  double p_fa = 0.0;
  double p_md = 0.0;
  double p_cmp = 0.0;
  int bisection_levels = 10;
  int nb_bs = 32;
  int nb_ue = 32;
  bool bs_first = true;
  bool use_phi_s_override = true;
  PiecewisePrior prior_t;  // empty pieces means uniform over the initial support
  PiecewisePrior prior_r;
};

struct SimContext {
  SimConfig cfg;
  DetectionDesign detection;
  PolicyContext policy;
  Schedule schedule;
  PiecewisePrior prior_t;
  PiecewisePrior prior_r;
};

SimContext prepare(const SimConfig& cfg);

struct FrameOutcome {
  double energy_total = 0.0;  // J
  double energy_align = 0.0;  // J
  double energy_data = 0.0;   // J
  double bits = 0.0;
  bool aligned = false;      // dominant cluster inside the data beam
  bool error_event = false;  // dominant cluster escaped the support during alignment
  bool data_ok = false;
  int L_used = 0;
  double align_time = 0.0;   // s
};

FrameOutcome run_frame(const SimContext& ctx, Rng& rng);

// |z|^2 for one beacon, z = sqrt(kappa) h_in + CN(0,1), kappa from the beacon energy over its 2D beam
double beacon_statistic(const DetectionDesign& d, double energy, double beam_measure_2d, std::complex<double> h_in,
                        Rng& rng);

struct MonteCarloStats {
  std::uint64_t trials = 0;
  double mean_power = 0.0;  // W
  double ci_power = 0.0;    // 95% half-width
  double sd_power = 0.0;
  double mean_se = 0.0;     // bit/s/Hz
  double ci_se = 0.0;
  double sd_se = 0.0;
  double mean_throughput = 0.0;  // bit/s
  double alignment_success_rate = 0.0;
  double error_rate = 0.0;
  double outage_rate = 0.0;             // frames delivering nothing
  double outage_given_aligned = 0.0;
  double mean_align_time = 0.0;
};

MonteCarloStats run_monte_carlo(const SimContext& ctx, std::uint64_t trials, std::uint64_t seed,
                                std::vector<FrameOutcome>* per_trial = nullptr);

struct Comparison {
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool flagged = false;
};

struct AnalyticReport {
  Comparison throughput;
  Comparison power;
};

AnalyticReport analytic_vs_empirical(const SimContext& ctx, std::uint64_t trials, std::uint64_t seed);

std::string per_trial_csv(const std::vector<FrameOutcome>& rows, PolicyKind policy);

}  // namespace ba
