#include "beamalign/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "beamalign/error.hpp"
#include "beamalign/units.hpp"

namespace ba {

std::string format_dbm(double watts) {
  std::ostringstream os;
  if (!(watts > 0.0)) return "-inf";
  if (!std::isfinite(watts)) return "inf";
  os << std::fixed << std::setprecision(3) << watt_to_dbm(watts);
  return os.str();
}

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string db3(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << x;
  return os.str();
}

double ci_db(const MonteCarloStats& s) {
  if (!(s.mean_power > 0.0)) return 0.0;
  return to_db((s.mean_power + s.ci_power) / s.mean_power);
}

}  // namespace

std::string plan_report(const ExperimentConfig& cfg) {
  const SystemParams& p = cfg.sim.params;
  SimContext c = prepare(cfg.sim);
  const Schedule& s = c.schedule;
  std::ostringstream os;
  os << std::setprecision(10);
  os << "L_star = " << s.L_star << "\n";
  os << "L_min = " << (s.L_min ? std::to_string(*s.L_min) : std::string("none")) << "\n";
  os << "rho =";
  for (std::size_t k = 0; k < s.rho.size(); ++k) os << (k ? ", " : " ") << s.rho[k];
  os << "\n";
  os << "theta = " << s.theta << "\n";
  os << "q_star = " << c.policy.outage.q_star << "\n";
  os << "rate_dc_bps = " << s.rate_dc << "\n";
  os << "v0_J_per_rad2 = " << s.v.front() << "\n";
  os << "phi_s_J_per_rad2 = " << s.phi_s << "\n";
  os << "nu_star = " << c.detection.nu_star << "\n";
  if (s.power > 0.0) {
    os << "power_W = " << s.power << "\n";
    os << "power_dBm = " << format_dbm(s.power) << "\n";
  } else {
    os << "power_W = 0 W\n";
    os << "power_dBm = -inf\n";
  }
  if (p.rate_min > 0.0) {
    double no_align = dc_value(0, {p, c.policy.outage, s.phi_s}) * s.support_measure / s.frame_duration;
    os << "no_alignment_power_dBm = " << format_dbm(no_align) << "\n";
  }
  bool inc = true;
  for (std::size_t k = 0; k < s.rho_gap.size(); ++k) {
    if (!(s.rho_gap[k] > 0.0 && s.rho_gap[k] < 0.5)) inc = false;
    if (k + 1 < s.rho_gap.size() && !(s.rho_gap[k] > s.rho_gap[k + 1])) inc = false;
  }
  os << "rho_increasing_check = " << (inc ? "PASS" : "FAIL") << "\n";
  return os.str();
}

PePoint pe_point(const SystemParams& base, double p_e, double se) {
  SystemParams p = base;
  p.p_e = p_e;
  p.phi_s_override.reset();
  OutageDesign od = make_outage_design(p);
  DetectionDesign dd = make_detection_design(p, false);
  double target = se * p.bandwidth;
  auto eval = [&](double rate, PePoint& pt) {
    p.rate_min = rate;
    Schedule s = optimize_L({p, od, dd.phi_s});
    ErrorAnalysis ea = error_recursions(s, p_e, p_e);
    pt = {p_e, rate, ea.power, ea.throughput, s.L_star};
    return ea.throughput;
  };
  PePoint lo_pt, hi_pt;
  double lo = target, hi = target / (1.0 - p.outage_eps);
  eval(lo, lo_pt);
  if (target == 0.0) return lo_pt;
  int guard = 0;
  while (eval(hi, hi_pt) < target) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) fail(ErrorKind::Infeasible, "sweep-pe: target throughput unreachable");
  }
  for (int it = 0; it < 100 && hi / lo - 1.0 > 1e-12; ++it) {
    double mid = std::sqrt(lo * hi);
    PePoint m;
    if (eval(mid, m) >= target) {
      hi = mid;
      hi_pt = m;
    } else {
      lo = mid;
    }
  }
  return hi_pt;
}

std::string sweep_pe_csv(const ExperimentConfig& cfg) {
  if (cfg.sweep.variable != "pe") fail(ErrorKind::Domain, "sweep-pe needs sweep_variable = pe");
  auto grid = cfg.sweep.values();
  std::ostringstream os;
  os << "pe,rmin_bps,power_dBm,thr_bps\n";
  for (double se : cfg.se_list)
    for (double pe : grid) {
      PePoint pt = pe_point(cfg.sim.params, pe, se);
      os << sci(pt.p_e) << ',' << sci(pt.rate_min) << ',' << format_dbm(pt.power) << ',' << sci(pt.throughput)
         << '\n';
    }
  return os.str();
}

std::string compare_csv(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "se,rmin_bps";
  for (auto k : cfg.compare_policies) {
    std::string n = policy_name(k);
    os << ',' << n << "_power_W," << n << "_power_dBm," << n << "_ci_dB," << n << "_delivered_se";
  }
  os << '\n';
  for (double se : cfg.se_list) {
    double rate = se * cfg.sim.params.bandwidth;
    os << sci(se) << ',' << sci(rate);
    for (auto k : cfg.compare_policies) {
      SimConfig sc = cfg.sim;
      sc.policy = k;
      sc.params.rate_min = rate;
      if (k == PolicyKind::Bisection) sc.bisection_levels = std::min(sc.bisection_levels, sc.params.l_max);
      SimContext ctx = prepare(sc);
      MonteCarloStats st = run_monte_carlo(ctx, cfg.trials, cfg.seed);
      os << ',' << sci(st.mean_power) << ',' << format_dbm(st.mean_power) << ',' << db3(ci_db(st)) << ','
         << sci(st.mean_se);
    }
    os << '\n';
  }
  return os.str();
}

MatchedPower matched_power(const SimConfig& sim, double target_se, std::uint64_t trials, std::uint64_t seed) {
  auto run = [&](double rate) {
    SimConfig sc = sim;
    sc.params.rate_min = rate;
    return run_monte_carlo(prepare(sc), trials, seed);
  };
  double target = target_se;
  double lo = target * sim.params.bandwidth;
  double hi = lo * 1.05;
  MonteCarloStats hs = run(hi);
  int guard = 0;
  while (hs.mean_se < target) {
    lo = hi;
    hi *= 1.5;
    hs = run(hi);
    if (++guard > 40) fail(ErrorKind::Infeasible, "target spectral efficiency unreachable");
  }
  for (int it = 0; it < 30 && hi / lo - 1.0 > 1e-5; ++it) {
    double mid = std::sqrt(lo * hi);
    MonteCarloStats ms = run(mid);
    if (ms.mean_se >= target) {
      hi = mid;
      hs = ms;
    } else {
      lo = mid;
    }
  }
  return {hi, hs};
}

std::string multicluster_csv(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "weak_fraction,policy,rmin_bps,power_W,power_dBm,ci_dB,delivered_se\n";
  for (double rho : cfg.weak_fraction_list) {
    for (auto k : {PolicyKind::Dfs, PolicyKind::Bisection}) {
      SimConfig sc = cfg.sim;
      sc.params.clusters = 2;
      sc.params.weak_fraction = rho;
      sc.mode = ErrorMode::Signal;
      sc.policy = k;
      MatchedPower m = matched_power(sc, cfg.target_se, cfg.trials, cfg.seed);
      os << sci(rho) << ',' << policy_name(k) << ',' << sci(m.rate_min) << ',' << sci(m.stats.mean_power) << ','
         << format_dbm(m.stats.mean_power) << ',' << db3(ci_db(m.stats)) << ',' << sci(m.stats.mean_se) << '\n';
    }
  }
  return os.str();
}

std::string simulate_report(const ExperimentConfig& cfg, std::string* per_trial) {
  SimContext ctx = prepare(cfg.sim);
  std::vector<FrameOutcome> rows;
  MonteCarloStats st = run_monte_carlo(ctx, cfg.trials, cfg.seed, per_trial ? &rows : nullptr);
  if (per_trial) *per_trial = per_trial_csv(rows, cfg.sim.policy);
  std::ostringstream os;
  os << std::setprecision(10);
  os << "policy = " << policy_name(cfg.sim.policy) << "\n";
  os << "error_mode = " << error_mode_name(cfg.sim.mode) << "\n";
  os << "trials = " << st.trials << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "mean_power_W = " << st.mean_power << " +- " << st.ci_power << "\n";
  os << "mean_power_dBm = " << format_dbm(st.mean_power) << "\n";
  os << "mean_spectral_efficiency = " << st.mean_se << " +- " << st.ci_se << "\n";
  os << "alignment_success_rate = " << st.alignment_success_rate << "\n";
  os << "error_event_rate = " << st.error_rate << "\n";
  os << "outage_rate = " << st.outage_rate << "\n";
  os << "outage_given_aligned = " << st.outage_given_aligned << "\n";
  os << "mean_alignment_time_s = " << st.mean_align_time << "\n";
  bool dfs = cfg.sim.policy == PolicyKind::Dfs || cfg.sim.policy == PolicyKind::DfsNonuniform;
  if (dfs) {
    os << "analytic_power_W = " << ctx.schedule.power << "\n";
    double pfa = cfg.sim.mode == ErrorMode::Injected ? cfg.sim.p_fa : 0.0;
    double pmd = cfg.sim.mode == ErrorMode::Injected ? cfg.sim.p_md : 0.0;
    ErrorAnalysis ea = error_recursions(ctx.schedule, pfa, pmd);
    double sq = std::sqrt(static_cast<double>(st.trials));
    double se_p = st.sd_power / sq, se_t = st.sd_se * cfg.sim.params.bandwidth / sq;
    os << "analytic_error_power_W = " << ea.power << "\n";
    os << "analytic_error_throughput_bps = " << ea.throughput << "\n";
    if (se_p > 0) os << "z_power = " << (st.mean_power - ea.power) / se_p << "\n";
    if (se_t > 0) os << "z_throughput = " << (st.mean_throughput - ea.throughput) / se_t << "\n";
  }
  return os.str();
}

}  // namespace ba
