#include <doctest.h>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <cmath>

#include "beamalign/detection.hpp"
#include "beamalign/error.hpp"

using namespace ba;

namespace {

// Rician tail by composite Simpson, independent of the Poisson-mixture route
double q1_integral(double a, double b) {
  double hi = std::max(a, b) + 40.0;
  int n = 100000;
  double h = (hi - b) / n;
  auto f = [&](double x) {
    double ax = a * x;
    // exp(-(x-a)^2/2) * I0(ax) e^{-ax} keeps both factors finite
    double i0e = ax < 600 ? std::cyl_bessel_i(0.0, ax) * std::exp(-ax) : 1.0 / std::sqrt(2 * kPi * ax);
    return x * std::exp(-0.5 * (x - a) * (x - a)) * i0e;
  };
  double s = f(b) + f(hi);
  for (int i = 1; i < n; ++i) s += f(b + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double q1_series(double a, double b) {
  double pre = std::exp(-0.5 * (a * a + b * b));
  double s = 0;
  if (a < b) {
    for (int k = 0; k < 400; ++k) s += std::pow(a / b, k) * std::cyl_bessel_i(static_cast<double>(k), a * b);
    return pre * s;
  }
  for (int k = 1; k < 400; ++k) s += std::pow(b / a, k) * std::cyl_bessel_i(static_cast<double>(k), a * b);
  return 1.0 - pre * s;
}

double q1_boost(double a, double b) {
  boost::math::non_central_chi_squared d(2.0, a * a);
  return boost::math::cdf(boost::math::complement(d, b * b));
}

}  // namespace

TEST_CASE("threshold and false alarm") {
  CHECK(threshold(1e-5) == doctest::Approx(11.512925464970229));
  CHECK(p_fa(threshold(1e-5)) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(p_fa(threshold(0.3)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(threshold(0.0), Error);
  CHECK_THROWS_AS(threshold(1.0), Error);
}

TEST_CASE("Marcum Q1 closed-form edges") {
  CHECK(marcum_q1(0.0, std::sqrt(2.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(marcum_q1(3.0, 0.0) == 1.0);
  CHECK(marcum_q1(0.0, 0.0) == 1.0);
  CHECK_THROWS_AS(marcum_q1(-1.0, 1.0), Error);
}

TEST_CASE("Marcum Q1 against series and Rician integral") {
  double ref = q1_series(1.0, 1.0);
  CHECK(std::abs(q1_integral(1.0, 1.0) - ref) < 1e-10);
  CHECK(std::abs(marcum_q1(1.0, 1.0) - ref) < 1e-10);
  CHECK(marcum_q1(1.0, 1.0) == doctest::Approx(0.7328798037).epsilon(1e-9));
  for (double a : {0.1, 0.5, 2.0, 4.0, 7.0})
    for (double b : {0.2, 1.0, 3.0, 6.0, 9.0}) {
      double s = q1_series(a, b);
      double q = marcum_q1(a, b);
      CHECK_MESSAGE(std::abs(q - s) < 1e-10, "a=" << a << " b=" << b);
      CHECK_MESSAGE(std::abs(q - q1_integral(a, b)) < 1e-9, "a=" << a << " b=" << b);
    }
}

TEST_CASE("Marcum Q1 large arguments against boost noncentral chi-square") {
  for (double a : {10.0, 30.0, 80.0, 300.0})
    for (double rel : {0.7, 0.95, 1.0, 1.05, 1.3}) {
      double b = a * rel;
      MarcumQ m = marcum_q1_pair(a, b);
      double bq = q1_boost(a, b);
      double bqc = 1.0 - bq;
      CHECK_MESSAGE(std::abs(m.q - bq) < 1e-9, "a=" << a << " b=" << b);
      CHECK_MESSAGE(std::abs(m.q + m.qc - 1.0) < 1e-12, "a=" << a << " b=" << b);
      if (bqc > 1e-200 && bqc < 0.5) CHECK(std::abs(m.qc - bqc) < 1e-6 * bqc + 1e-14);
    }
  // tiny complement keeps relative precision where 1 - q would cancel
  boost::math::non_central_chi_squared d(2.0, 400.0);
  double tail = boost::math::cdf(d, 1.0);
  CHECK(marcum_q1_pair(20.0, 1.0).qc == doctest::Approx(tail).epsilon(1e-6));
}

TEST_CASE("Marcum Q1 monotonicity") {
  double prev = 1.0;
  for (double b = 0.0; b < 12; b += 0.25) {
    double q = marcum_q1(3.0, b);
    CHECK(q <= prev + 1e-15);
    prev = q;
  }
  prev = 0.0;
  for (double a = 0.0; a < 12; a += 0.25) {
    double q = marcum_q1(a, 3.0);
    CHECK(q >= prev - 1e-15);
    prev = q;
  }
}

TEST_CASE("misdetection and nu* under Rayleigh fading") {
  double s = 25000, var = 1.0 / 1.579e8, pe = 1e-5;
  double tau = threshold(pe);
  double nu = solve_nu_star(pe, 0.0, var, s);
  double closed = (tau / -std::log1p(-pe) - 1.0) / (s * var);
  CHECK(nu == doctest::Approx(closed).epsilon(1e-12));
  CHECK(p_md(nu, tau, 0.0, var, s) == doctest::Approx(pe).epsilon(1e-9));
  CHECK(nu * s * var == doctest::Approx(1.1513e6).epsilon(1e-4));
  CHECK(p_md(0.0, tau, 0.0, var, s) == doctest::Approx(1.0 - pe).epsilon(1e-12));
}

TEST_CASE("nu* with an estimate round-trips and decreases in p_e") {
  double g = 2.0, var = 0.5, s = 1.0;
  double prev = INFINITY;
  for (double pe : {1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.3}) {
    double nu = solve_nu_star(pe, g, var, s);
    CHECK(p_md(nu, threshold(pe), g, var, s) == doctest::Approx(pe).epsilon(1e-8));
    CHECK(nu < prev);
    prev = nu;
  }
  CHECK(p_md(10.0, 3.0, g, 0.0, s) < p_md(1.0, 3.0, g, 0.0, s));
}

TEST_CASE("nu* domain and feasibility") {
  CHECK_THROWS_AS(solve_nu_star(0.5, 0.0, 1.0, 1.0), Error);
  ErrorKind kind = ErrorKind::Io;
  try {
    solve_nu_star(0.6, 0.0, 1.0, 1.0);
  } catch (const Error& e) {
    kind = e.kind();
  }
  CHECK(kind == ErrorKind::Infeasible);
  CHECK_THROWS_AS(solve_nu_star(0.0, 0.0, 1.0, 1.0), Error);
}

TEST_CASE("phi_s scaling and override") {
  SystemParams p;
  double a = phi_s_from_nu(1.0, p);
  CHECK(phi_s_from_nu(3.0, p) == doctest::Approx(3 * a));
  CHECK(a == doctest::Approx(p.noise_psd * p.bandwidth * p.symbol_duration * p.symbol_energy / (4 * kPi * kPi)));
  DetectionDesign d = make_detection_design(p, true);
  CHECK(d.phi_s == *p.phi_s_override);
  DetectionDesign e = make_detection_design(p, false);
  CHECK(e.phi_s == doctest::Approx(phi_s_from_nu(e.nu_star, p)));
  // a minimum-energy beacon on a 2D beam of measure m reaches nu* ||s||^2
  double m = 0.37;
  CHECK(e.beacon_snr_factor(e.phi_s * m, m) == doctest::Approx(e.nu_star * p.symbol_energy));
}
