#pragma once

#include <vector>

namespace ba {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kMeasureTol = 1e-12;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// Union of half-open [lo, hi) intervals, kept sorted, disjoint and non-adjacent.
class AngleSet {
public:
  AngleSet() = default;
  explicit AngleSet(std::vector<Interval> raw);
  static AngleSet interval(double lo, double hi);
  static AngleSet full_circle();

  const std::vector<Interval>& intervals() const { return iv_; }
  bool empty() const { return iv_.empty(); }
  double measure() const;
  bool contains(double theta) const;
  double lowest() const;

  bool operator==(const AngleSet&) const = default;

private:
  std::vector<Interval> iv_;
};

double measure(const AngleSet& a);
AngleSet intersect(const AngleSet& a, const AngleSet& b);
AngleSet subtract(const AngleSet& a, const AngleSet& b);
AngleSet unite(const AngleSet& a, const AngleSet& b);
bool contains(const AngleSet& a, double theta);
bool is_subset(const AngleSet& a, const AngleSet& b);
AngleSet take_fraction(const AngleSet& a, double rho);

struct PriorPiece {
  Interval iv;
  double density = 0.0;
};

// Piecewise-constant density on a union of intervals, normalized to unit mass.
class PiecewisePrior {
public:
  PiecewisePrior() = default;
  // weights are relative densities; the result is renormalized
  explicit PiecewisePrior(std::vector<PriorPiece> pieces);
  static PiecewisePrior uniform(const AngleSet& support);

  const std::vector<PriorPiece>& pieces() const { return pieces_; }
  const AngleSet& support() const { return support_; }
  double mass(const AngleSet& s) const;
  double density(double theta) const;
  bool is_uniform_on(const AngleSet& s) const;
  // inverse-CDF sample from a uniform variate u in [0,1)
  double sample(double u) const;

private:
  std::vector<PriorPiece> pieces_;
  AngleSet support_;
};

AngleSet top_mass_subset(const AngleSet& a, const PiecewisePrior& f, double rho);

}  // namespace ba
