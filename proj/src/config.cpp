#include "beamalign/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "beamalign/error.hpp"
#include "beamalign/units.hpp"

namespace ba {

namespace {

struct KeyDef {
  const char* key;
  const char* value;
  const char* doc;
};

// defaults follow the reference experiment set-up
const KeyDef kKeys[] = {
    {"carrier_frequency_hz", "30e9", "carrier frequency [Hz]"},
    {"distance_m", "10", "BS-UE distance [m]"},
    {"path_loss_exponent", "2", "free-space path loss exponent"},
    {"noise_psd_dbm_hz", "-173", "noise power spectral density [dBm/Hz]"},
    {"bandwidth_hz", "500e6", "system bandwidth [Hz]"},
    {"frame_duration_s", "0.02", "frame duration [s]"},
    {"slots", "200", "slots per frame"},
    {"beacon_duration_s", "50e-6", "beacon duration [s]"},
    {"feedback_duration_s", "50e-6", "feedback duration [s]"},
    {"outage_eps", "0.01", "data-phase outage probability"},
    {"rate_min_bps", "7.5e9", "rate demand [bit/s]"},
    {"p_e", "1e-5", "target false-alarm / misdetection probability"},
    {"fading", "rayleigh", "rayleigh | estimated"},
    {"csi_gain_est", "0", "estimated gain |h_hat|^2 (estimated mode)"},
    {"csi_error_var", "0", "estimation error variance (estimated mode)"},
    {"phi_s_override_dbm", "-94", "beacon energy density [dBm-scaled J/rad^2], or none"},
    {"symbol_duration_s", "2e-9", "beacon symbol duration [s]"},
    {"symbol_energy", "25000", "beacon sequence energy ||s||^2"},
    {"l_max", "14", "maximum number of alignment slots"},
    {"support_t", "-1.5707963267948966:1.5707963267948966", "initial AoD support lo:hi[,lo:hi...] [rad]"},
    {"support_r", "-1.5707963267948966:1.5707963267948966", "initial AoA support lo:hi[,lo:hi...] [rad]"},
    {"clusters", "1", "1 | 2"},
    {"weak_fraction", "0", "energy fraction of the weak cluster"},
    {"antennas_bs", "128", "BS antennas (recorded only)"},
    {"antennas_ue", "128", "UE antennas (recorded only)"},
    {"policy", "dfs", "dfs | dfs-nonuniform | bisection | ces | ies"},
    {"error_mode", "none", "none | injected | signal"},
    {"p_fa", "auto", "injected false-alarm probability (auto = p_e)"},
    {"p_md", "auto", "injected misdetection probability (auto = p_e)"},
    {"p_cmp", "auto", "injected comparison error (auto = max(p_fa, p_md))"},
    {"bisection_levels", "auto", "bisection depth (auto = l_max)"},
    {"nb_bs", "32", "BS sectors for exhaustive search"},
    {"nb_ue", "32", "UE sectors for exhaustive search"},
    {"probe_order", "bs-first", "bs-first | ue-first"},
    {"prior_t", "uniform", "AoD prior lo:hi:weight[;...] or uniform"},
    {"prior_r", "uniform", "AoA prior lo:hi:weight[;...] or uniform"},
    {"trials", "10000", "Monte-Carlo frames"},
    {"seed", "1", "random seed"},
    {"output", "", "output path"},
    {"sweep_variable", "pe", "sweep axis variable"},
    {"sweep_min", "1e-8", "sweep start"},
    {"sweep_max", "1e-1", "sweep end"},
    {"sweep_points", "29", "sweep points"},
    {"sweep_scale", "log", "log | linear"},
    {"se_list", "1,8,15", "spectral efficiencies [bit/s/Hz]"},
    {"compare_policies", "dfs,bisection,ies,ces", "policies for compare"},
    {"weak_fraction_list", "0,0.05,0.1", "weak cluster fractions for multicluster"},
    {"target_se", "15", "delivered spectral efficiency for multicluster [bit/s/Hz]"},
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    fail(ErrorKind::Parse, "key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    fail(ErrorKind::Parse, "key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split(v, ',')) out.push_back(to_double(key, s));
  if (out.empty()) fail(ErrorKind::Parse, "key '" + key + "': empty list");
  return out;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  if (points < 1) fail(ErrorKind::Domain, "sweep_points must be >= 1");
  std::vector<double> v;
  if (points == 1) return {min};
  for (int i = 0; i < points; ++i) {
    double t = static_cast<double>(i) / (points - 1);
    if (scale == SweepScale::Log) v.push_back(std::exp(std::log(min) + t * (std::log(max) - std::log(min))));
    else v.push_back(min + t * (max - min));
  }
  return v;
}

AngleSet parse_angle_set(const std::string& s) {
  std::vector<Interval> ivs;
  for (const auto& part : split(s, ',')) {
    auto lh = split(part, ':');
    if (lh.size() != 2) fail(ErrorKind::Parse, "angle interval must be lo:hi, got '" + part + "'");
    double lo = to_double("support", lh[0]), hi = to_double("support", lh[1]);
    if (!(hi > lo) || lo < -kPi - 1e-12 || hi > kPi + 1e-12)
      fail(ErrorKind::Parse, "angle interval out of range: '" + part + "'");
    ivs.push_back({lo, hi});
  }
  return AngleSet(std::move(ivs));
}

PiecewisePrior parse_prior(const std::string& s) {
  if (trim(s) == "uniform") return {};
  std::vector<PriorPiece> pcs;
  for (const auto& part : split(s, ';')) {
    auto f = split(part, ':');
    if (f.size() != 3) fail(ErrorKind::Parse, "prior piece must be lo:hi:weight, got '" + part + "'");
    pcs.push_back({{to_double("prior", f[0]), to_double("prior", f[1])}, to_double("prior", f[2])});
  }
  return PiecewisePrior(std::move(pcs));
}

Config::Config() {
  for (const auto& k : kKeys) values_[k.key] = k.value;
}

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> ks = [] {
    std::vector<std::string> v;
    for (const auto& k : kKeys) v.push_back(k.key);
    return v;
  }();
  return ks;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) fail(ErrorKind::Parse, "unknown config key '" + key + "'");
  values_[key] = trim(value);
}

std::string Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorKind::Parse, "unknown config key '" + key + "'");
  return it->second;
}

void Config::parse(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::Parse, origin + ":" + std::to_string(n) + ": expected key = value");
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorKind::Parse, origin + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  resolve();
}

void Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  parse(ss.str(), path);
}

ExperimentConfig Config::resolve() const {
  auto num = [&](const char* k) { return to_double(k, get(k)); };
  auto integer = [&](const char* k) { return to_int(k, get(k)); };
  ExperimentConfig e;
  SystemParams& p = e.sim.params;
  p.wavelength = kSpeedOfLight / num("carrier_frequency_hz");
  p.distance = num("distance_m");
  p.path_loss_exponent = num("path_loss_exponent");
  p.noise_psd = dbm_to_watt(num("noise_psd_dbm_hz"));
  p.bandwidth = num("bandwidth_hz");
  p.frame_duration = num("frame_duration_s");
  p.slots = static_cast<int>(integer("slots"));
  p.beacon_duration = num("beacon_duration_s");
  p.feedback_duration = num("feedback_duration_s");
  p.outage_eps = num("outage_eps");
  p.rate_min = num("rate_min_bps");
  p.p_e = num("p_e");
  std::string fading = get("fading");
  if (fading == "rayleigh") p.fading = Fading::Rayleigh;
  else if (fading == "estimated") p.fading = Fading::Estimated;
  else fail(ErrorKind::Parse, "fading must be rayleigh or estimated");
  p.gain_est = num("csi_gain_est");
  p.error_var = num("csi_error_var");
  std::string ov = get("phi_s_override_dbm");
  if (ov == "none") p.phi_s_override.reset();
  else p.phi_s_override = dbm_to_watt(to_double("phi_s_override_dbm", ov));
  p.symbol_duration = num("symbol_duration_s");
  p.symbol_energy = num("symbol_energy");
  p.l_max = static_cast<int>(integer("l_max"));
  p.support_t = parse_angle_set(get("support_t"));
  p.support_r = parse_angle_set(get("support_r"));
  p.clusters = static_cast<int>(integer("clusters"));
  p.weak_fraction = num("weak_fraction");
  p.antennas_bs = static_cast<int>(integer("antennas_bs"));
  p.antennas_ue = static_cast<int>(integer("antennas_ue"));
  p.validate();

  SimConfig& s = e.sim;
  s.policy = parse_policy(get("policy"));
  s.mode = parse_error_mode(get("error_mode"));
  s.p_fa = get("p_fa") == "auto" ? p.p_e : num("p_fa");
  s.p_md = get("p_md") == "auto" ? p.p_e : num("p_md");
  s.p_cmp = get("p_cmp") == "auto" ? std::max(s.p_fa, s.p_md) : num("p_cmp");
  for (double q : {s.p_fa, s.p_md, s.p_cmp})
    if (!(q >= 0.0 && q < 1.0)) fail(ErrorKind::Parse, "injected error probabilities must lie in [0,1)");
  s.bisection_levels = get("bisection_levels") == "auto" ? p.l_max : static_cast<int>(integer("bisection_levels"));
  if (s.bisection_levels < 0 || s.bisection_levels > p.l_max)
    fail(ErrorKind::Parse, "bisection_levels must lie in [0, l_max]");
  s.nb_bs = static_cast<int>(integer("nb_bs"));
  s.nb_ue = static_cast<int>(integer("nb_ue"));
  if (s.nb_bs < 1 || s.nb_ue < 1) fail(ErrorKind::Parse, "nb_bs and nb_ue must be >= 1");
  std::string order = get("probe_order");
  if (order == "bs-first") s.bs_first = true;
  else if (order == "ue-first") s.bs_first = false;
  else fail(ErrorKind::Parse, "probe_order must be bs-first or ue-first");
  s.prior_t = parse_prior(get("prior_t"));
  s.prior_r = parse_prior(get("prior_r"));
  if (!s.prior_t.pieces().empty() && !is_subset(p.support_t, s.prior_t.support()))
    fail(ErrorKind::Parse, "prior_t must cover support_t");
  if (!s.prior_r.pieces().empty() && !is_subset(p.support_r, s.prior_r.support()))
    fail(ErrorKind::Parse, "prior_r must cover support_r");

  long long trials = integer("trials");
  if (trials < 1) fail(ErrorKind::Parse, "trials must be >= 1");
  e.trials = static_cast<std::uint64_t>(trials);
  e.seed = static_cast<std::uint64_t>(integer("seed"));
  e.output = get("output");
  e.sweep.variable = get("sweep_variable");
  e.sweep.min = num("sweep_min");
  e.sweep.max = num("sweep_max");
  e.sweep.points = static_cast<int>(integer("sweep_points"));
  std::string sc = get("sweep_scale");
  if (sc == "log") e.sweep.scale = SweepScale::Log;
  else if (sc == "linear") e.sweep.scale = SweepScale::Linear;
  else fail(ErrorKind::Parse, "sweep_scale must be log or linear");
  if (e.sweep.scale == SweepScale::Log && !(e.sweep.min > 0 && e.sweep.max > 0))
    fail(ErrorKind::Parse, "log sweep needs positive bounds");
  e.se_list = to_list("se_list", get("se_list"));
  e.compare_policies.clear();
  for (const auto& name : split(get("compare_policies"), ',')) e.compare_policies.push_back(parse_policy(name));
  if (e.compare_policies.empty()) fail(ErrorKind::Parse, "compare_policies is empty");
  e.weak_fraction_list = to_list("weak_fraction_list", get("weak_fraction_list"));
  e.target_se = num("target_se");
  return e;
}

std::string Config::dump() const {
  std::ostringstream os;
  for (const auto& k : kKeys) os << "# " << k.doc << "\n" << k.key << " = " << values_.at(k.key) << "\n";
  return os.str();
}

}  // namespace ba
