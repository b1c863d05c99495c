#include "beamalign/phy.hpp"

#include <cmath>
#include <sstream>

#include "beamalign/error.hpp"

namespace ba {

double SystemParams::csi_gain() const { return fading == Fading::Rayleigh ? 0.0 : gain_est; }

double SystemParams::csi_variance() const {
  return fading == Fading::Rayleigh ? 1.0 / path_loss(*this) : error_var;
}

void SystemParams::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::Domain, std::string("invalid parameter: ") + what);
  };
  need(wavelength > 0, "wavelength must be positive");
  need(distance > 0, "distance must be positive");
  need(path_loss_exponent > 0, "path loss exponent must be positive");
  need(noise_psd > 0, "noise psd must be positive");
  need(bandwidth > 0, "bandwidth must be positive");
  need(frame_duration > 0, "frame duration must be positive");
  need(slots >= 1, "slots must be >= 1");
  need(beacon_duration > 0 && feedback_duration > 0, "beacon/feedback durations must be positive");
  need(outage_eps > 0 && outage_eps < 1, "outage_eps must be in (0,1)");
  need(rate_min >= 0, "rate_min must be >= 0");
  need(p_e > 0 && p_e < 0.5, "p_e must be in (0, 0.5)");
  need(gain_est >= 0 && error_var >= 0, "CSI moments must be >= 0");
  need(!phi_s_override || *phi_s_override > 0, "phi_s override must be positive");
  need(symbol_duration > 0 && symbol_energy > 0, "symbol duration/energy must be positive");
  need(l_max >= 0, "l_max must be >= 0");
  need(support_t.measure() > 0 && support_r.measure() > 0, "initial supports must be non-empty");
  need(clusters == 1 || clusters == 2, "clusters must be 1 or 2");
  need(weak_fraction >= 0 && weak_fraction < 0.5, "weak_fraction must be in [0, 0.5)");
  double slot = slot_duration();
  if (slot < beacon_duration + feedback_duration * (1 - 1e-12)) {
    std::ostringstream os;
    os << "slot duration " << slot << " s shorter than beacon + feedback";
    fail(ErrorKind::Domain, os.str());
  }
}

double path_loss(const SystemParams& p) {
  return std::pow(4.0 * kPi * p.distance / p.wavelength, p.path_loss_exponent);
}

double sectored_gain(const AngleSet& beam, double theta) {
  double m = beam.measure();
  if (!(m > 0)) fail(ErrorKind::Domain, "sectored_gain: empty beam");
  return beam.contains(theta) ? 2.0 * kPi / m : 0.0;
}

double ChannelDraw::in_beam_gain(const AngleSet& bt, const AngleSet& br) const {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& c : clusters)
    if (bt.contains(c.theta_t) && br.contains(c.theta_r)) sum += c.h;
  return std::norm(sum);
}

ChannelDraw draw_channel(const SystemParams& p, const PiecewisePrior& prior_t,
                         const PiecewisePrior& prior_r, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double var = p.csi_variance();
  double gain = p.csi_gain();
  ChannelDraw d;
  d.gain_est = gain;
  int k = p.clusters;
  for (int i = 0; i < k; ++i) {
    Cluster c;
    c.energy_fraction = k == 1 ? 1.0 : (i == 0 ? 1.0 - p.weak_fraction : p.weak_fraction);
    c.theta_t = prior_t.sample(uniform01(rng));
    c.theta_r = prior_r.sample(uniform01(rng));
    double phase = 2.0 * kPi * uniform01(rng);
    double sd = std::sqrt(var / 2.0);
    std::complex<double> est = std::polar(std::sqrt(gain), phase);
    std::complex<double> err{sd * gauss(rng), sd * gauss(rng)};
    double scale = std::sqrt(c.energy_fraction);
    c.h_est = scale * est;
    c.h = scale * (est + err);
    d.clusters.push_back(c);
  }
  return d;
}

double beamforming_factor(double power, double beam_measure_2d, const SystemParams& p) {
  return 4.0 * kPi * kPi * power / (p.noise_psd * p.bandwidth * beam_measure_2d);
}

double snr(double power, const AngleSet& bt, const AngleSet& br, double theta_t, double theta_r,
           double gamma, const SystemParams& p) {
  if (!bt.contains(theta_t) || !br.contains(theta_r)) return 0.0;
  return beamforming_factor(power, bt.measure() * br.measure(), p) * gamma;
}

}  // namespace ba
