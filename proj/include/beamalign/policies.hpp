#pragma once

#include <cstddef>
#include <vector>

#include "beamalign/angleset.hpp"
#include "beamalign/outage.hpp"
#include "beamalign/phy.hpp"
#include "beamalign/planner.hpp"

namespace ba {

enum class Dim { BS, UE, None };
enum class Phase { Align, Data };
enum class ActionKind { Align, Communicate };
enum class Feedback { Ack, Nack, Null };

struct BeliefState {
  AngleSet support_t;
  AngleSet support_r;
  double backlog = 0.0;  // bits
  Phase phase = Phase::Align;
  int slot = 0;
  PiecewisePrior prior_t;
  PiecewisePrior prior_r;
};

struct Action {
  ActionKind kind = ActionKind::Align;
  Dim beta = Dim::None;
  AngleSet beam_t;
  AngleSet beam_r;
  double rate = 0.0;    // bit/s
  double energy = 0.0;  // J
  double power = 0.0;   // W
  double align_prob = 1.0;  // P(theta in beam | support), data actions only
};

struct PolicyContext {
  SystemParams params;
  OutageDesign outage;
  double phi_s = 0.0;
  bool bs_first = true;
};

BeliefState initial_state(const SystemParams& p, const PiecewisePrior& prior_t, const PiecewisePrior& prior_r);

Dim probe_dimension(int k, bool bs_first);

Action dfs_decide(const BeliefState& s, const Schedule& sched, const PolicyContext& ctx);
Action nonuniform_dfs_decide(const BeliefState& s, const Schedule& sched, const PolicyContext& ctx);
BeliefState apply_feedback(const BeliefState& s, const Action& a, Feedback fb, double slot_duration);

struct Probe {
  AngleSet beam_t;
  AngleSet beam_r;
  double energy = 0.0;
};

// Source of beacon outcomes; the simulator supplies error-free, injected or signal-level versions.
class Sounder {
public:
  virtual ~Sounder() = default;
  virtual bool ack(const Probe& probe) = 0;
  // receiver-side comparison over beacons sent back to back; returns the index judged strongest
  virtual std::size_t pick(const std::vector<Probe>& probes) = 0;
};

struct BaselineAlignment {
  AngleSet support_t;
  AngleSet support_r;
  double align_time = 0.0;    // s
  double align_energy = 0.0;  // J
  int beacons = 0;
  int levels = 0;
};

std::vector<AngleSet> split_sectors(const AngleSet& a, int count);

BaselineAlignment run_bisection(const PolicyContext& ctx, int levels, Sounder& sounder);
BaselineAlignment run_exhaustive(const PolicyContext& ctx, bool interactive, int nb_bs, int nb_ue, Sounder& sounder);

// data action for a baseline after its alignment phase, at the remaining-time rate
Action baseline_data_action(const BaselineAlignment& al, const PolicyContext& ctx);

}  // namespace ba
