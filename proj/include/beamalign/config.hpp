#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "beamalign/simulator.hpp"

namespace ba {

enum class SweepScale { Linear, Log };

struct SweepAxis {
  std::string variable = "pe";
  double min = 1e-8;
  double max = 1e-1;
  int points = 29;
  SweepScale scale = SweepScale::Log;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  SimConfig sim;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string output;
  SweepAxis sweep;
  std::vector<double> se_list{1.0, 8.0, 15.0};
  std::vector<PolicyKind> compare_policies{PolicyKind::Dfs, PolicyKind::Bisection, PolicyKind::Ies, PolicyKind::Ces};
  std::vector<double> weak_fraction_list{0.0, 0.05, 0.1};
  double target_se = 15.0;
};

// Flat `key = value` configuration. Every key has a default; unknown keys are rejected.
class Config {
public:
  Config();

  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  void parse(const std::string& text, const std::string& origin = "<text>");
  void load(const std::string& path);

  ExperimentConfig resolve() const;
  // resolved key = value listing, suitable for archiving next to outputs
  std::string dump() const;

  static const std::vector<std::string>& keys();

private:
  std::map<std::string, std::string> values_;
};

AngleSet parse_angle_set(const std::string& s);
PiecewisePrior parse_prior(const std::string& s);

}  // namespace ba
