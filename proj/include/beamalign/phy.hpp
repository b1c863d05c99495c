#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "beamalign/angleset.hpp"
#include "beamalign/rng.hpp"

namespace ba {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class Fading { Rayleigh, Estimated };

struct SystemParams {
  double wavelength = kSpeedOfLight / 30e9;   // m
  double distance = 10.0;                     // m
  double path_loss_exponent = 2.0;
  double noise_psd = 5.011872336272725e-21;   // W/Hz, -173 dBm/Hz
  double bandwidth = 500e6;                   // Hz
  double frame_duration = 20e-3;              // s
  int slots = 200;
  double beacon_duration = 50e-6;             // s
  double feedback_duration = 50e-6;           // s
  double outage_eps = 0.01;
  double rate_min = 7.5e9;                    // bit/s
  double p_e = 1e-5;
  Fading fading = Fading::Rayleigh;
  double gain_est = 0.0;                      // |h_hat|^2, estimated mode only
  double error_var = 0.0;                     // sigma_e^2, estimated mode only
  std::optional<double> phi_s_override = 3.981071705534973e-13;  // J/rad^2, -94 dBm
  double symbol_duration = 2e-9;              // s
  double symbol_energy = 25000.0;             // ||s||^2
  int l_max = 14;
  AngleSet support_t = AngleSet::interval(-kPi / 2, kPi / 2);
  AngleSet support_r = AngleSet::interval(-kPi / 2, kPi / 2);
  int clusters = 1;
  double weak_fraction = 0.0;
  int antennas_bs = 128;
  int antennas_ue = 128;

  double slot_duration() const { return frame_duration / slots; }
  double support_measure() const { return support_t.measure() * support_r.measure(); }
  // posterior mean gain and error variance actually used by detector and outage design
  double csi_gain() const;
  double csi_variance() const;
  void validate() const;
};

double path_loss(const SystemParams& p);

double sectored_gain(const AngleSet& beam, double theta);

struct Cluster {
  double theta_t = 0.0;
  double theta_r = 0.0;
  std::complex<double> h;
  std::complex<double> h_est;
  double energy_fraction = 1.0;
};

struct ChannelDraw {
  std::vector<Cluster> clusters;  // clusters[0] is the dominant one
  double gain_est = 0.0;

  double gamma() const { return std::norm(clusters.front().h); }
  // |sum of in-beam cluster gains|^2
  double in_beam_gain(const AngleSet& bt, const AngleSet& br) const;
};

ChannelDraw draw_channel(const SystemParams& p, const PiecewisePrior& prior_t,
                         const PiecewisePrior& prior_r, Rng& rng);

// nu = (2 pi)^2 P / (N0 W |Bt||Br|)
double beamforming_factor(double power, double beam_measure_2d, const SystemParams& p);

double snr(double power, const AngleSet& bt, const AngleSet& br, double theta_t, double theta_r,
           double gamma, const SystemParams& p);

}  // namespace ba
