#include "beamalign/policies.hpp"

#include <cmath>

#include "beamalign/error.hpp"

namespace ba {

namespace {

void require_strict_subset(const AngleSet& beam, const AngleSet& support) {
  double mb = beam.measure(), mu = support.measure();
  if (!(mb > 0.0) || !(mb < mu) || !is_subset(beam, support))
    fail(ErrorKind::Protocol, "alignment beam must be a non-empty strict subset of the support");
}

void require_subset(const AngleSet& beam, const AngleSet& support) {
  if (!(beam.measure() > 0.0) || !is_subset(beam, support))
    fail(ErrorKind::Protocol, "data beam must be a non-empty subset of the support");
}

Action align_action(Dim beta, AngleSet bt, AngleSet br, const PolicyContext& ctx) {
  Action a;
  a.kind = ActionKind::Align;
  a.beta = beta;
  a.beam_t = std::move(bt);
  a.beam_r = std::move(br);
  a.energy = ctx.phi_s * a.beam_t.measure() * a.beam_r.measure();
  a.power = a.energy / ctx.params.beacon_duration;
  return a;
}

Action data_action(AngleSet bt, AngleSet br, double rate, double duration, double align_prob,
                   const PolicyContext& ctx) {
  Action a;
  a.kind = ActionKind::Communicate;
  a.beta = Dim::None;
  a.beam_t = std::move(bt);
  a.beam_r = std::move(br);
  a.rate = rate;
  a.align_prob = align_prob;
  a.energy = data_energy(rate, duration, a.beam_t.measure() * a.beam_r.measure(), align_prob, ctx.outage,
                         ctx.params);
  a.power = a.energy / duration;
  return a;
}

}  // namespace

BeliefState initial_state(const SystemParams& p, const PiecewisePrior& prior_t, const PiecewisePrior& prior_r) {
  BeliefState s;
  s.support_t = p.support_t;
  s.support_r = p.support_r;
  s.backlog = p.rate_min * p.frame_duration;
  s.phase = Phase::Align;
  s.slot = 0;
  s.prior_t = prior_t;
  s.prior_r = prior_r;
  return s;
}

Dim probe_dimension(int k, bool bs_first) {
  bool even = k % 2 == 0;
  return (even == bs_first) ? Dim::BS : Dim::UE;
}

Action dfs_decide(const BeliefState& s, const Schedule& sched, const PolicyContext& ctx) {
  int k = s.slot;
  if (k < sched.L_star) {
    double rho = sched.rho[k];
    if (probe_dimension(k, ctx.bs_first) == Dim::BS) {
      AngleSet b = take_fraction(s.support_t, rho);
      require_strict_subset(b, s.support_t);
      return align_action(Dim::BS, std::move(b), s.support_r, ctx);
    }
    AngleSet b = take_fraction(s.support_r, rho);
    require_strict_subset(b, s.support_r);
    return align_action(Dim::UE, s.support_t, std::move(b), ctx);
  }
  AngleSet br = take_fraction(s.support_r, sched.theta);
  require_subset(br, s.support_r);
  return data_action(s.support_t, std::move(br), sched.rate_dc, sched.slot_duration, sched.theta, ctx);
}

Action nonuniform_dfs_decide(const BeliefState& s, const Schedule& sched, const PolicyContext& ctx) {
  int k = s.slot;
  if (k < sched.L_star) {
    double rho = sched.rho[k];
    if (probe_dimension(k, ctx.bs_first) == Dim::BS) {
      AngleSet b = top_mass_subset(s.support_t, s.prior_t, rho);
      require_strict_subset(b, s.support_t);
      return align_action(Dim::BS, std::move(b), s.support_r, ctx);
    }
    AngleSet b = top_mass_subset(s.support_r, s.prior_r, rho);
    require_strict_subset(b, s.support_r);
    return align_action(Dim::UE, s.support_t, std::move(b), ctx);
  }
  AngleSet br = top_mass_subset(s.support_r, s.prior_r, sched.theta);
  require_subset(br, s.support_r);
  double prob = s.prior_r.mass(br) / s.prior_r.mass(s.support_r);
  prob = std::min(prob, 1.0);
  return data_action(s.support_t, std::move(br), sched.rate_dc, sched.slot_duration, prob, ctx);
}

BeliefState apply_feedback(const BeliefState& s, const Action& a, Feedback fb, double slot_duration) {
  BeliefState n = s;
  n.slot = s.slot + 1;
  if (a.kind == ActionKind::Communicate) {
    if (fb != Feedback::Null) fail(ErrorKind::Protocol, "data slots carry no ACK/NACK feedback");
    n.phase = Phase::Data;
    n.backlog = std::max(s.backlog - a.rate * slot_duration, 0.0);
    return n;
  }
  if (fb == Feedback::Null) fail(ErrorKind::Protocol, "alignment slot requires ACK or NACK feedback");
  bool ack = fb == Feedback::Ack;
  if (a.beta == Dim::BS) {
    n.support_t = ack ? intersect(s.support_t, a.beam_t) : subtract(s.support_t, a.beam_t);
  } else {
    n.support_r = ack ? intersect(s.support_r, a.beam_r) : subtract(s.support_r, a.beam_r);
  }
  return n;
}

std::vector<AngleSet> split_sectors(const AngleSet& a, int count) {
  if (count < 1) fail(ErrorKind::Domain, "split_sectors: count must be >= 1");
  std::vector<AngleSet> out;
  AngleSet rest = a;
  for (int i = 0; i < count; ++i) {
    if (i == count - 1) {
      out.push_back(rest);
      break;
    }
    AngleSet s = take_fraction(rest, 1.0 / (count - i));
    rest = subtract(rest, s);
    out.push_back(std::move(s));
  }
  return out;
}

BaselineAlignment run_bisection(const PolicyContext& ctx, int levels, Sounder& sounder) {
  const SystemParams& p = ctx.params;
  BaselineAlignment r;
  r.support_t = p.support_t;
  r.support_r = p.support_r;
  for (int l = 0; l < levels; ++l) {
    bool bs = probe_dimension(l, ctx.bs_first) == Dim::BS;
    const AngleSet& u = bs ? r.support_t : r.support_r;
    AngleSet lower = take_fraction(u, 0.5);
    AngleSet upper = subtract(u, lower);
    std::vector<Probe> probes(2);
    for (int i = 0; i < 2; ++i) {
      const AngleSet& half = i == 0 ? lower : upper;
      probes[i].beam_t = bs ? half : r.support_t;
      probes[i].beam_r = bs ? r.support_r : half;
      probes[i].energy = ctx.phi_s * probes[i].beam_t.measure() * probes[i].beam_r.measure();
      r.align_energy += probes[i].energy;
    }
    std::size_t w = sounder.pick(probes);
    if (bs) r.support_t = w == 0 ? lower : upper;
    else r.support_r = w == 0 ? lower : upper;
    r.beacons += 2;
    ++r.levels;
    r.align_time += 2.0 * p.beacon_duration + p.feedback_duration;
  }
  return r;
}

BaselineAlignment run_exhaustive(const PolicyContext& ctx, bool interactive, int nb_bs, int nb_ue,
                                 Sounder& sounder) {
  const SystemParams& p = ctx.params;
  BaselineAlignment r;
  r.support_t = p.support_t;
  r.support_r = p.support_r;
  r.levels = 2;
  for (int phase = 0; phase < 2; ++phase) {
    bool bs = phase == 0;
    auto sectors = split_sectors(bs ? p.support_t : p.support_r, bs ? nb_bs : nb_ue);
    auto probe_of = [&](const AngleSet& sec) {
      Probe pr;
      pr.beam_t = bs ? sec : r.support_t;
      pr.beam_r = bs ? p.support_r : sec;
      pr.energy = ctx.phi_s * pr.beam_t.measure() * pr.beam_r.measure();
      return pr;
    };
    AngleSet chosen;
    if (interactive) {
      chosen = bs ? p.support_t : p.support_r;
      for (const auto& sec : sectors) {
        Probe pr = probe_of(sec);
        r.align_energy += pr.energy;
        r.beacons += 1;
        r.align_time += p.beacon_duration + p.feedback_duration;
        if (sounder.ack(pr)) {
          chosen = sec;
          break;
        }
      }
    } else {
      std::vector<Probe> probes;
      for (const auto& sec : sectors) {
        probes.push_back(probe_of(sec));
        r.align_energy += probes.back().energy;
      }
      r.beacons += static_cast<int>(probes.size());
      r.align_time += probes.size() * p.beacon_duration + p.feedback_duration;
      chosen = sectors[sounder.pick(probes)];
    }
    if (bs) r.support_t = chosen;
    else r.support_r = chosen;
  }
  return r;
}

Action baseline_data_action(const BaselineAlignment& al, const PolicyContext& ctx) {
  const SystemParams& p = ctx.params;
  double remaining = p.frame_duration - al.align_time;
  if (!(remaining > 0.0)) fail(ErrorKind::Infeasible, "baseline alignment consumes the whole frame");
  double rate = p.rate_min * p.frame_duration / remaining;
  AngleSet br = take_fraction(al.support_r, ctx.outage.theta);
  return data_action(al.support_t, std::move(br), rate, remaining, ctx.outage.theta, ctx);
}

}  // namespace ba
