#pragma once

#include <cstdint>
#include <string>

#include "beamalign/config.hpp"

namespace ba {

std::string plan_report(const ExperimentConfig& cfg);

struct PePoint {
  double p_e = 0.0;
  double rate_min = 0.0;     // bit/s that delivers the target throughput
  double power = 0.0;        // W
  double throughput = 0.0;   // bit/s
  int L_star = 0;
};

// analytic power needed to deliver se*W bit/s at detector target p_e
PePoint pe_point(const SystemParams& base, double p_e, double se);

std::string sweep_pe_csv(const ExperimentConfig& cfg);
std::string compare_csv(const ExperimentConfig& cfg);
std::string multicluster_csv(const ExperimentConfig& cfg);
std::string simulate_report(const ExperimentConfig& cfg, std::string* per_trial);

struct MatchedPower {
  double rate_min = 0.0;
  MonteCarloStats stats;
};

// Monte-Carlo power at the smallest rate demand whose delivered spectral efficiency reaches target_se
MatchedPower matched_power(const SimConfig& sim, double target_se, std::uint64_t trials, std::uint64_t seed);

std::string format_dbm(double watts);

}  // namespace ba
