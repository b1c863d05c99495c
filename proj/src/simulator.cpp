#include "beamalign/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>
#include <thread>

#include "beamalign/error.hpp"

namespace ba {

const char* policy_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::Dfs: return "dfs";
    case PolicyKind::DfsNonuniform: return "dfs-nonuniform";
    case PolicyKind::Bisection: return "bisection";
    case PolicyKind::Ces: return "ces";
    case PolicyKind::Ies: return "ies";
  }
  return "?";
}

PolicyKind parse_policy(const std::string& s) {
  for (auto k : {PolicyKind::Dfs, PolicyKind::DfsNonuniform, PolicyKind::Bisection, PolicyKind::Ces, PolicyKind::Ies})
    if (s == policy_name(k)) return k;
  fail(ErrorKind::Parse, "unknown policy '" + s + "'");
}

const char* error_mode_name(ErrorMode m) {
  switch (m) {
    case ErrorMode::None: return "none";
    case ErrorMode::Injected: return "injected";
    case ErrorMode::Signal: return "signal";
  }
  return "?";
}

ErrorMode parse_error_mode(const std::string& s) {
  for (auto m : {ErrorMode::None, ErrorMode::Injected, ErrorMode::Signal})
    if (s == error_mode_name(m)) return m;
  fail(ErrorKind::Parse, "unknown error mode '" + s + "'");
}

SimContext prepare(const SimConfig& cfg) {
  cfg.params.validate();
  SimContext c;
  c.cfg = cfg;
  c.detection = make_detection_design(cfg.params, cfg.use_phi_s_override);
  c.policy.params = cfg.params;
  c.policy.outage = make_outage_design(cfg.params);
  c.policy.phi_s = c.detection.phi_s;
  c.policy.bs_first = cfg.bs_first;
  PlanInputs in{cfg.params, c.policy.outage, c.detection.phi_s};
  c.schedule = optimize_L(in);
  c.prior_t = cfg.prior_t.pieces().empty() ? PiecewisePrior::uniform(cfg.params.support_t) : cfg.prior_t;
  c.prior_r = cfg.prior_r.pieces().empty() ? PiecewisePrior::uniform(cfg.params.support_r) : cfg.prior_r;
  if (cfg.policy == PolicyKind::Bisection && cfg.bisection_levels > cfg.params.l_max)
    fail(ErrorKind::Domain, "bisection depth exceeds l_max");
  return c;
}

double beacon_statistic(const DetectionDesign& d, double energy, double beam_measure_2d, std::complex<double> h_in,
                        Rng& rng) {
  double kappa = d.beacon_snr_factor(energy, beam_measure_2d);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::complex<double> z = std::sqrt(kappa) * h_in + std::complex<double>(g(rng), g(rng));
  return std::norm(z);
}

namespace {

std::complex<double> in_beam_sum(const ChannelDraw& ch, const AngleSet& bt, const AngleSet& br) {
  std::complex<double> s{0.0, 0.0};
  for (const auto& c : ch.clusters)
    if (bt.contains(c.theta_t) && br.contains(c.theta_r)) s += c.h;
  return s;
}

bool holds_dominant(const ChannelDraw& ch, const AngleSet& bt, const AngleSet& br) {
  const auto& c = ch.clusters.front();
  return bt.contains(c.theta_t) && br.contains(c.theta_r);
}

class FrameSounder : public Sounder {
public:
  FrameSounder(const SimContext& ctx, const ChannelDraw& ch, Rng& rng) : ctx_(ctx), ch_(ch), rng_(rng) {}

  bool ack(const Probe& pr) override {
    const auto& cfg = ctx_.cfg;
    bool truth = holds_dominant(ch_, pr.beam_t, pr.beam_r);
    switch (cfg.mode) {
      case ErrorMode::None: return truth;
      case ErrorMode::Injected: {
        double u = uniform01(rng_);
        return truth ? u >= cfg.p_md : u < cfg.p_fa;
      }
      case ErrorMode::Signal: return statistic(pr) > ctx_.detection.tau;
    }
    return truth;
  }

  std::size_t pick(const std::vector<Probe>& probes) override {
    const auto& cfg = ctx_.cfg;
    if (cfg.mode == ErrorMode::Signal) {
      std::size_t best = 0;
      double bv = -1.0;
      for (std::size_t i = 0; i < probes.size(); ++i) {
        double v = statistic(probes[i]);
        if (v > bv) {
          bv = v;
          best = i;
        }
      }
      return best;
    }
    std::size_t truth = probes.size();
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (holds_dominant(ch_, probes[i].beam_t, probes[i].beam_r)) {
        truth = i;
        break;
      }
    if (cfg.mode == ErrorMode::None) return truth < probes.size() ? truth : 0;
    std::size_t n = probes.size();
    if (truth == n) return std::min<std::size_t>(n - 1, static_cast<std::size_t>(uniform01(rng_) * n));
    if (n > 1 && uniform01(rng_) < cfg.p_cmp) {
      std::size_t other = std::min<std::size_t>(n - 2, static_cast<std::size_t>(uniform01(rng_) * (n - 1)));
      return other >= truth ? other + 1 : other;
    }
    return truth;
  }

  double statistic(const Probe& pr) {
    return beacon_statistic(ctx_.detection, pr.energy, pr.beam_t.measure() * pr.beam_r.measure(),
                            in_beam_sum(ch_, pr.beam_t, pr.beam_r), rng_);
  }

private:
  const SimContext& ctx_;
  const ChannelDraw& ch_;
  Rng& rng_;
};

void settle_data(const SimContext& ctx, const ChannelDraw& ch, const Action& a, double duration,
                 FrameOutcome& out) {
  const SystemParams& p = ctx.cfg.params;
  out.aligned = holds_dominant(ch, a.beam_t, a.beam_r);
  if (a.rate <= 0.0) {
    out.data_ok = true;
    return;
  }
  double gain = std::norm(in_beam_sum(ch, a.beam_t, a.beam_r));
  double nu = beamforming_factor(a.power, a.beam_t.measure() * a.beam_r.measure(), p);
  double need = std::expm1(a.rate / p.bandwidth * std::log(2.0));
  out.data_ok = nu * gain >= need * (1.0 - 1e-12);
  if (out.data_ok) out.bits = a.rate * duration;
}

FrameOutcome run_dfs_frame(const SimContext& ctx, const ChannelDraw& ch, Rng& rng) {
  const auto& sched = ctx.schedule;
  const SystemParams& p = ctx.cfg.params;
  FrameSounder sounder(ctx, ch, rng);
  bool nonuniform = ctx.cfg.policy == PolicyKind::DfsNonuniform;
  BeliefState s = initial_state(p, ctx.prior_t, ctx.prior_r);
  FrameOutcome out;
  const auto& dom = ch.clusters.front();
  for (int k = 0; k < sched.L_star; ++k) {
    Action a = nonuniform ? nonuniform_dfs_decide(s, sched, ctx.policy) : dfs_decide(s, sched, ctx.policy);
    bool ack = sounder.ack({a.beam_t, a.beam_r, a.energy});
    out.energy_align += a.energy;
    s = apply_feedback(s, a, ack ? Feedback::Ack : Feedback::Nack, sched.slot_duration);
    if (!s.support_t.contains(dom.theta_t) || !s.support_r.contains(dom.theta_r)) out.error_event = true;
  }
  out.L_used = sched.L_star;
  out.align_time = sched.L_star * sched.slot_duration;
  int data_slots = sched.slots - sched.L_star;
  if (data_slots > 0) {
    Action a = nonuniform ? nonuniform_dfs_decide(s, sched, ctx.policy) : dfs_decide(s, sched, ctx.policy);
    // the beam is fixed over the data phase, so every data slot repeats this action
    for (int k = 0; k < data_slots; ++k) out.energy_data += a.energy;
    settle_data(ctx, ch, a, data_slots * sched.slot_duration, out);
  }
  out.energy_total = out.energy_align + out.energy_data;
  return out;
}

FrameOutcome run_baseline_frame(const SimContext& ctx, const ChannelDraw& ch, Rng& rng) {
  FrameSounder sounder(ctx, ch, rng);
  const auto& cfg = ctx.cfg;
  BaselineAlignment al;
  if (cfg.policy == PolicyKind::Bisection) al = run_bisection(ctx.policy, cfg.bisection_levels, sounder);
  else al = run_exhaustive(ctx.policy, cfg.policy == PolicyKind::Ies, cfg.nb_bs, cfg.nb_ue, sounder);
  FrameOutcome out;
  out.energy_align = al.align_energy;
  out.align_time = al.align_time;
  out.L_used = al.beacons;
  out.error_event = !holds_dominant(ch, al.support_t, al.support_r);
  Action a = baseline_data_action(al, ctx.policy);
  out.energy_data = a.energy;
  settle_data(ctx, ch, a, cfg.params.frame_duration - al.align_time, out);
  out.energy_total = out.energy_align + out.energy_data;
  return out;
}

}  // namespace

FrameOutcome run_frame(const SimContext& ctx, Rng& rng) {
  ChannelDraw ch = draw_channel(ctx.cfg.params, ctx.prior_t, ctx.prior_r, rng);
  switch (ctx.cfg.policy) {
    case PolicyKind::Dfs:
    case PolicyKind::DfsNonuniform: return run_dfs_frame(ctx, ch, rng);
    default: return run_baseline_frame(ctx, ch, rng);
  }
}

MonteCarloStats run_monte_carlo(const SimContext& ctx, std::uint64_t trials, std::uint64_t seed,
                                std::vector<FrameOutcome>* per_trial) {
  if (trials < 1) fail(ErrorKind::Domain, "run_monte_carlo: trials must be >= 1");
  std::vector<FrameOutcome> rows(trials);
  unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(std::min<std::uint64_t>(trials, 64))));
  auto work = [&](unsigned w) {
    for (std::uint64_t t = w; t < trials; t += workers) {
      Rng rng = trial_rng(seed, t);
      rows[t] = run_frame(ctx, rng);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  const SystemParams& p = ctx.cfg.params;
  double n = static_cast<double>(trials);
  double sp = 0, sp2 = 0, ss = 0, ss2 = 0, aligned = 0, err = 0, outage = 0, out_al = 0, atime = 0;
  for (const auto& r : rows) {
    double pw = r.energy_total / p.frame_duration;
    double se = r.bits / p.frame_duration / p.bandwidth;
    sp += pw; sp2 += pw * pw;
    ss += se; ss2 += se * se;
    aligned += r.aligned;
    err += r.error_event;
    outage += !r.data_ok;
    out_al += r.aligned && !r.data_ok;
    atime += r.align_time;
  }
  MonteCarloStats st;
  st.trials = trials;
  st.mean_power = sp / n;
  st.mean_se = ss / n;
  double vp = trials > 1 ? std::max(0.0, (sp2 - sp * sp / n) / (n - 1)) : 0.0;
  double vs = trials > 1 ? std::max(0.0, (ss2 - ss * ss / n) / (n - 1)) : 0.0;
  st.sd_power = std::sqrt(vp);
  st.sd_se = std::sqrt(vs);
  st.ci_power = 1.96 * st.sd_power / std::sqrt(n);
  st.ci_se = 1.96 * st.sd_se / std::sqrt(n);
  st.mean_throughput = st.mean_se * p.bandwidth;
  st.alignment_success_rate = aligned / n;
  st.error_rate = err / n;
  st.outage_rate = outage / n;
  st.outage_given_aligned = aligned > 0 ? out_al / aligned : 0.0;
  st.mean_align_time = atime / n;
  if (per_trial) *per_trial = std::move(rows);
  return st;
}

AnalyticReport analytic_vs_empirical(const SimContext& ctx, std::uint64_t trials, std::uint64_t seed) {
  if (ctx.cfg.mode != ErrorMode::Injected)
    fail(ErrorKind::Domain, "analytic_vs_empirical requires injected error mode");
  ErrorAnalysis ea = error_recursions(ctx.schedule, ctx.cfg.p_fa, ctx.cfg.p_md);
  MonteCarloStats st = run_monte_carlo(ctx, trials, seed);
  double sq = std::sqrt(static_cast<double>(trials));
  auto cmp = [](double analytic, double emp, double se) {
    Comparison c{analytic, emp, se, 0.0, false};
    double diff = emp - analytic;
    if (se > 0.0) c.z = diff / se;
    else c.z = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    // rounding-level gaps count as agreement when the frame energy barely varies
    c.flagged = std::abs(diff) > 3.0 * se + 1e-9 * std::abs(analytic);
    return c;
  };
  AnalyticReport r;
  r.throughput = cmp(ea.throughput, st.mean_throughput, st.sd_se * ctx.cfg.params.bandwidth / sq);
  r.power = cmp(ea.power, st.mean_power, st.sd_power / sq);
  return r;
}

std::string per_trial_csv(const std::vector<FrameOutcome>& rows, PolicyKind policy) {
  std::ostringstream os;
  os << "trial,policy,energy_J,bits,aligned,e_flag,L_used\n";
  os << std::setprecision(12);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << i << ',' << policy_name(policy) << ',' << r.energy_total << ',' << r.bits << ',' << (r.aligned ? 1 : 0)
       << ',' << (r.error_event ? 1 : 0) << ',' << r.L_used << '\n';
  }
  return os.str();
}

}  // namespace ba
