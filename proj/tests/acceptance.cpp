#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "beamalign/detection.hpp"
#include "beamalign/experiments.hpp"
#include "beamalign/planner.hpp"
#include "beamalign/simulator.hpp"
#include "beamalign/units.hpp"

using namespace ba;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
};

int failures = 0;

void report(const char* id, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " exception: " << e.what();
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = dt <= budget_s;
  bool ok = v.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s %-22s runtime=%.2fs (limit %.0fs%s) |%s\n", ok ? "PASS" : "FAIL", id, dt, budget_s,
              in_time ? "" : ", exceeded", v.detail.str().c_str());
  std::fflush(stdout);
}

double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(g));
}

// ---------------------------------------------------------------------------

void schedule_invariants(Verdict& v) {
  std::mt19937_64 g(101);
  int bad_rho = 0, bad_v = 0, bad_half = 0, bad_cross = 0, aligned = 0;
  double worst_cross = 0.0;
  for (int t = 0; t < 200; ++t) {
    SystemParams p;
    p.slots = std::uniform_int_distribution<int>(50, 500)(g);
    p.rate_min = log_uniform(g, 1e6, 1e10);
    p.l_max = p.slots - 1;
    double phi = dbm_to_watt(std::uniform_real_distribution<double>(-120.0, -60.0)(g));
    PlanInputs in = make_plan_inputs(p, phi);
    Schedule s = optimize_L(in);
    if (s.L_star > 0) ++aligned;
    for (int k = 0; k < s.L_star; ++k) {
      if (!(s.rho_gap[k] > 0.0 && s.rho_gap[k] < 0.5 && s.rho[k] > 0.0 && s.rho[k] <= 0.5)) ++bad_rho;
      if (k + 1 < s.L_star && !(s.rho_gap[k + 1] < s.rho_gap[k])) ++bad_rho;
      double direct = 0.5 * (1.0 - phi / (2.0 * s.v[k + 1]));
      double e = std::abs(s.rho[k] - direct);
      worst_cross = std::max(worst_cross, e);
      if (e > 1e-10) ++bad_cross;
    }
    // every searched length, not only the optimum
    if (s.L_min) {
      for (int L = std::max(1, *s.L_min); L <= std::min(p.slots - 1, p.l_max); ++L) {
        auto vv = v_recursion(L, in);
        if (!std::isfinite(vv[L])) break;
        for (int k = 0; k < L; ++k) {
          if (vv[k] > vv[k + 1]) ++bad_v;
          if (!(vv[k] > phi / 2.0)) ++bad_half;
        }
      }
    }
  }
  v.pass = bad_rho == 0 && bad_v == 0 && bad_half == 0 && bad_cross == 0;
  v.detail << " sets=200 with_alignment=" << aligned << " rho_violations=" << bad_rho
           << " v_monotone_violations=" << bad_v << " v_le_half_phi=" << bad_half
           << " max|rho-direct|=" << worst_cross;
}

// ---------------------------------------------------------------------------

struct DpInstance {
  SystemParams p;
  PlanInputs in;
};

double interleaving_dp(const DpInstance& d, const std::vector<double>* grid) {
  const int units = 60;
  const int rates[] = {10, 12, 15, 20, 24, 30, 40, 60};
  int n = d.p.slots;
  std::vector<double> coef(std::size(rates));
  for (std::size_t i = 0; i < std::size(rates); ++i)
    coef[i] = phi_d(rates[i] * d.p.rate_min * n / units, d.in.outage, d.p);
  double ps = d.in.phi_s;
  std::vector<double> next(units + 1, kInf), cur(units + 1);
  next[0] = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    cur[0] = 0.0;
    for (int D = 1; D <= units; ++D) {
      double best = kInf;
      double w = next[D];
      if (std::isfinite(w)) {
        if (grid) {
          for (double r : *grid) best = std::min(best, ps * r + (r * r + (1 - r) * (1 - r)) * w);
        } else {
          best = std::min(best, w <= ps / 2 ? w : w - (2 * w - ps) * (2 * w - ps) / (8 * w));
        }
      }
      for (std::size_t i = 0; i < std::size(rates); ++i) {
        double rest = next[std::max(D - rates[i], 0)];
        if (std::isfinite(rest)) best = std::min(best, coef[i] + rest);
      }
      cur[D] = best;
    }
    std::swap(cur, next);
  }
  return next[units];
}

double two_phase_grid(const DpInstance& d, const Schedule& s, const std::vector<double>& grid) {
  double best = dc_value(0, d.in);
  if (!s.L_min) return best;
  for (int L = std::max(1, *s.L_min); L <= d.p.slots - 1; ++L) {
    double w = dc_value(L, d.in);
    for (int k = 0; k < L; ++k) {
      double m = kInf;
      for (double r : grid) m = std::min(m, d.in.phi_s * r + (r * r + (1 - r) * (1 - r)) * w);
      w = m;
    }
    best = std::min(best, w);
  }
  return best;
}

void interleaving_oracle(Verdict& v) {
  std::mt19937_64 g(202);
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
  int bad = 0, aligned = 0;
  double worst_exact = 0.0, worst_grid = 0.0;
  for (int t = 0; t < 20; ++t) {
    DpInstance d;
    d.p.slots = std::uniform_int_distribution<int>(3, 6)(g);
    d.p.l_max = d.p.slots - 1;
    d.p.rate_min = log_uniform(g, 1e8, 5e9);
    d.in = make_plan_inputs(d.p, 0.0);
    d.in.phi_s = log_uniform(g, 1e-3, 2.0) * dc_value(0, d.in);
    Schedule s = optimize_L(d.in);
    if (s.L_star > 0) ++aligned;
    double v0 = s.v.front();
    double exact = interleaving_dp(d, nullptr);
    double gridded = interleaving_dp(d, &grid);
    double fixed_grid = two_phase_grid(d, s, grid);
    double rel_exact = (exact - v0) / v0;
    double rel_grid = (gridded - v0) / v0;
    worst_exact = std::max(worst_exact, std::abs(rel_exact));
    worst_grid = std::max(worst_grid, rel_grid);
    // the gridded interleaving value may only lose to the two-phase optimum by rho quantization
    bool ok = std::abs(rel_exact) <= 1e-9 && gridded >= v0 * (1 - 1e-12) && gridded <= fixed_grid * (1 + 1e-12);
    if (!ok) ++bad;
  }
  v.pass = bad == 0;
  v.detail << " instances=20 with_alignment=" << aligned << " mismatches=" << bad
           << " max|exact-rho DP - v0|/v0=" << worst_exact << " max grid-DP excess=" << worst_grid;
}

// ---------------------------------------------------------------------------

void error_identity(Verdict& v) {
  std::mt19937_64 g(303);
  int bad = 0, nontrivial = 0;
  double worst = 0.0, worst_thr = 0.0;
  for (int t = 0; t < 100; ++t) {
    SystemParams p;
    p.slots = std::uniform_int_distribution<int>(20, 200)(g);
    p.rate_min = log_uniform(g, 1e7, 1e10);
    p.l_max = std::uniform_int_distribution<int>(1, 30)(g);
    PlanInputs in = make_plan_inputs(p, 0.0);
    in.phi_s = log_uniform(g, 1e-6, 0.5) * dc_value(0, in);
    Schedule s = optimize_L(in);
    if (s.L_star > 0) ++nontrivial;
    ErrorAnalysis z = error_recursions(s, 0.0, 0.0);
    double r = std::abs(z.h[0] + z.u[0]) / s.v.front();
    worst = std::max(worst, r);
    if (r > 1e-12) ++bad;
    double pe = log_uniform(g, 1e-6, 0.2);
    ErrorAnalysis e = error_recursions(s, pe, pe);
    double want = (1 - s.eps) * s.rate_min * std::pow(1 - pe, s.L_star);
    double rt = std::abs(e.throughput - want) / want;
    worst_thr = std::max(worst_thr, rt);
    if (rt > 1e-12) ++bad;
  }
  v.pass = bad == 0;
  v.detail << " schedules=100 with_alignment=" << nontrivial << " max|h0+u0|/v0=" << worst
           << " max throughput rel.err=" << worst_thr;
}

// ---------------------------------------------------------------------------

void mc_vs_analytic(Verdict& v) {
  for (double pe : {1e-3, 1e-2}) {
    SimConfig c;
    c.mode = ErrorMode::Injected;
    c.p_fa = c.p_md = pe;
    SimContext ctx = prepare(c);
    AnalyticReport r = analytic_vs_empirical(ctx, 100000, 404);
    bool ok = !r.power.flagged && !r.throughput.flagged;
    v.pass = v.pass && ok;
    v.detail << " p=" << pe << ": power " << format_dbm(r.power.empirical) << " vs " << format_dbm(r.power.analytic)
             << " dBm (z=" << r.power.z << "), thr " << r.throughput.empirical << " vs " << r.throughput.analytic
             << " bps (z=" << r.throughput.z << ");";
  }
}

// ---------------------------------------------------------------------------

void detector_calibration(Verdict& v) {
  const int n = 1000000;
  for (double pe : {1e-5, 1e-3}) {
    SystemParams p;
    p.p_e = pe;
    DetectionDesign d = make_detection_design(p);
    auto prior = PiecewisePrior::uniform(p.support_t);
    Rng rng(505);
    double m = 0.7;
    double energy = d.phi_s * m;
    int fa = 0, md = 0;
    for (int i = 0; i < n; ++i) {
      if (beacon_statistic(d, energy, m, {0.0, 0.0}, rng) > d.tau) ++fa;
      ChannelDraw ch = draw_channel(p, prior, prior, rng);
      if (beacon_statistic(d, energy, m, ch.clusters.front().h, rng) <= d.tau) ++md;
    }
    double sd = std::sqrt(pe * (1 - pe) / n);
    double rfa = static_cast<double>(fa) / n, rmd = static_cast<double>(md) / n;
    bool ok = std::abs(rfa - pe) <= 3 * sd && std::abs(rmd - pe) <= 3 * sd;
    v.pass = v.pass && ok;
    v.detail << " p_e=" << pe << ": p_fa=" << rfa << " p_md=" << rmd << " (3sigma=" << 3 * sd << ");";
  }
}

// ---------------------------------------------------------------------------

void pe_interior_minimum(Verdict& v) {
  SweepAxis ax;
  auto grid = ax.values();
  SystemParams base;
  for (double se : {1.0, 8.0, 15.0}) {
    std::vector<double> pw;
    for (double pe : grid) pw.push_back(pe_point(base, pe, se).power);
    auto it = std::min_element(pw.begin(), pw.end());
    std::size_t i = static_cast<std::size_t>(it - pw.begin());
    bool interior = i > 0 && i + 1 < pw.size() && *it < pw.front() && *it < pw.back();
    v.pass = v.pass && interior;
    v.detail << " SE=" << se << ": argmin p_e=" << grid[i] << " (" << format_dbm(*it) << " dBm, ends "
             << format_dbm(pw.front()) << "/" << format_dbm(pw.back()) << ")" << (interior ? "" : " at boundary")
             << ";";
  }
}

// ---------------------------------------------------------------------------

struct Measured {
  double mean, ci;
};

double gap_db(const Measured& dfs, const Measured& other) { return to_db(other.mean / dfs.mean); }

double gap_ci_db(const Measured& a, const Measured& b) {
  double ra = a.ci / a.mean, rb = b.ci / b.mean;
  return 10.0 / std::log(10.0) * std::sqrt(ra * ra + rb * rb);
}

void baseline_gaps(Verdict& v) {
  SimConfig c;
  c.params.l_max = 10;
  c.params.rate_min = 15.0 * c.params.bandwidth;
  c.mode = ErrorMode::Signal;
  c.bisection_levels = 10;
  auto run = [&](PolicyKind k) {
    SimConfig sc = c;
    sc.policy = k;
    MonteCarloStats st = run_monte_carlo(prepare(sc), 10000, 707);
    return Measured{st.mean_power, st.ci_power};
  };
  Measured dfs = run(PolicyKind::Dfs);
  struct Want {
    PolicyKind k;
    const char* name;
    double need;
  };
  v.detail << " DFS " << format_dbm(dfs.mean) << " dBm;";
  for (Want w : {Want{PolicyKind::Bisection, "BiS", 2.5}, Want{PolicyKind::Ies, "IES", 5.5},
                 Want{PolicyKind::Ces, "CES", 11.0}}) {
    Measured b = run(w.k);
    double gap = gap_db(dfs, b), ci = gap_ci_db(dfs, b);
    bool ok = gap + ci >= w.need;
    v.pass = v.pass && ok;
    v.detail << " " << w.name << " " << format_dbm(b.mean) << " dBm gap=" << gap << "+-" << ci << " dB (need "
             << w.need << ")" << (ok ? "" : " short") << ";";
  }
}

// ---------------------------------------------------------------------------

void nonuniform_bound(Verdict& v) {
  SimConfig c;
  PlanInputs in = make_plan_inputs(c.params, 0.0);
  c.params.phi_s_override = 0.02 * dc_value(0, in);
  c.policy = PolicyKind::DfsNonuniform;
  const std::uint64_t trials = 20000;
  SimContext uni = prepare(c);
  double pu = uni.schedule.power;
  MonteCarloStats su = run_monte_carlo(uni, trials, 808);
  bool uniform_ok = std::abs(su.mean_power - pu) <= su.ci_power + 1e-9 * pu;
  v.pass = uniform_ok;
  v.detail << " planned " << format_dbm(pu) << " dBm; uniform prior " << format_dbm(su.mean_power) << " dBm"
           << (uniform_ok ? "" : " (outside CI)") << ";";

  std::mt19937_64 g(809);
  std::uniform_real_distribution<double> w(0.1, 5.0);
  auto random_prior = [&](const AngleSet& sup) {
    int n = std::uniform_int_distribution<int>(2, 6)(g);
    double lo = sup.lowest(), m = sup.measure();
    std::vector<PriorPiece> pcs;
    for (int i = 0; i < n; ++i) pcs.push_back({{lo + m * i / n, lo + m * (i + 1) / n}, w(g)});
    return PiecewisePrior(pcs);
  };
  int above = 0;
  double lowest = kInf, highest = 0;
  for (int t = 0; t < 10; ++t) {
    SimConfig sc = c;
    sc.prior_t = random_prior(c.params.support_t);
    sc.prior_r = random_prior(c.params.support_r);
    MonteCarloStats st = run_monte_carlo(prepare(sc), trials, 810 + t);
    if (st.mean_power > pu + st.ci_power) ++above;
    lowest = std::min(lowest, st.mean_power);
    highest = std::max(highest, st.mean_power);
  }
  v.pass = v.pass && above == 0;
  v.detail << " 10 random priors: " << format_dbm(lowest) << ".." << format_dbm(highest) << " dBm, above bound="
           << above << ";";
}

// ---------------------------------------------------------------------------

void multicluster(Verdict& v) {
  const double fractions[] = {0.0, 0.05, 0.1};
  std::vector<Measured> dfs, bis;
  for (double f : fractions) {
    for (auto k : {PolicyKind::Dfs, PolicyKind::Bisection}) {
      SimConfig sc;
      sc.params.clusters = 2;
      sc.params.weak_fraction = f;
      sc.params.l_max = 10;
      sc.bisection_levels = 10;
      sc.mode = ErrorMode::Signal;
      sc.policy = k;
      MatchedPower m = matched_power(sc, 15.0, 10000, 909);
      (k == PolicyKind::Dfs ? dfs : bis).push_back({m.stats.mean_power, m.stats.ci_power});
    }
  }
  auto rises = [](const std::vector<Measured>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
      if (x[i].mean + x[i].ci < x[i - 1].mean - x[i - 1].ci) return false;
    return true;
  };
  bool dfs_rise = rises(dfs), bis_rise = rises(bis);
  bool below = true;
  for (std::size_t i = 0; i < dfs.size(); ++i)
    if (!(dfs[i].mean < bis[i].mean)) below = false;
  double deg = to_db(dfs[1].mean / dfs[0].mean);
  bool deg_ok = deg >= 1.0 && deg <= 3.0;
  v.pass = dfs_rise && bis_rise && below && deg_ok;
  v.detail << " DFS dBm";
  for (auto& x : dfs) v.detail << " " << format_dbm(x.mean);
  v.detail << "; BiS dBm";
  for (auto& x : bis) v.detail << " " << format_dbm(x.mean);
  v.detail << "; monotone DFS=" << (dfs_rise ? "yes" : "no") << " BiS=" << (bis_rise ? "yes" : "no")
           << "; DFS<BiS throughout=" << (below ? "yes" : "no") << "; DFS degradation at 0.05 = " << deg << " dB";
}

}  // namespace

int main() {
  report("schedule_invariants", 5, schedule_invariants);
  report("interleaving_dp", 60, interleaving_oracle);
  report("error_identity", 5, error_identity);
  report("mc_vs_analytic", 120, mc_vs_analytic);
  report("detector_calibration", 60, detector_calibration);
  report("pe_interior_minimum", 5, pe_interior_minimum);
  report("baseline_gaps", 300, baseline_gaps);
  report("nonuniform_bound", 180, nonuniform_bound);
  report("multicluster", 300, multicluster);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
