#include "beamalign/angleset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "beamalign/error.hpp"

namespace ba {

AngleSet::AngleSet(std::vector<Interval> raw) {
  std::erase_if(raw, [](const Interval& i) { return !(i.hi > i.lo); });
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& i : raw) {
    if (!iv_.empty() && i.lo <= iv_.back().hi) {
      iv_.back().hi = std::max(iv_.back().hi, i.hi);
    } else {
      iv_.push_back(i);
    }
  }
}

AngleSet AngleSet::interval(double lo, double hi) { return AngleSet({{lo, hi}}); }

AngleSet AngleSet::full_circle() { return interval(-kPi, kPi); }

double AngleSet::measure() const {
  double m = 0.0;
  for (const auto& i : iv_) m += i.length();
  return m;
}

bool AngleSet::contains(double theta) const {
  auto it = std::upper_bound(iv_.begin(), iv_.end(), theta,
                             [](double t, const Interval& i) { return t < i.lo; });
  if (it == iv_.begin()) return false;
  --it;
  return theta >= it->lo && theta < it->hi;
}

double AngleSet::lowest() const {
  if (iv_.empty()) fail(ErrorKind::Domain, "lowest() of an empty angle set");
  return iv_.front().lo;
}

double measure(const AngleSet& a) { return a.measure(); }

bool contains(const AngleSet& a, double theta) { return a.contains(theta); }

AngleSet intersect(const AngleSet& a, const AngleSet& b) {
  std::vector<Interval> out;
  const auto& x = a.intervals();
  const auto& y = b.intervals();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    double lo = std::max(x[i].lo, y[j].lo);
    double hi = std::min(x[i].hi, y[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (x[i].hi < y[j].hi) ++i; else ++j;
  }
  return AngleSet(std::move(out));
}

AngleSet subtract(const AngleSet& a, const AngleSet& b) {
  std::vector<Interval> out;
  const auto& y = b.intervals();
  std::size_t j = 0;
  for (const auto& iv : a.intervals()) {
    double cur = iv.lo;
    while (j < y.size() && y[j].hi <= cur) ++j;
    std::size_t k = j;
    while (k < y.size() && y[k].lo < iv.hi) {
      if (y[k].lo > cur) out.push_back({cur, y[k].lo});
      cur = std::max(cur, y[k].hi);
      if (cur >= iv.hi) break;
      ++k;
    }
    if (cur < iv.hi) out.push_back({cur, iv.hi});
  }
  return AngleSet(std::move(out));
}

AngleSet unite(const AngleSet& a, const AngleSet& b) {
  std::vector<Interval> raw = a.intervals();
  raw.insert(raw.end(), b.intervals().begin(), b.intervals().end());
  return AngleSet(std::move(raw));
}

bool is_subset(const AngleSet& a, const AngleSet& b) { return subtract(a, b).empty(); }

AngleSet take_fraction(const AngleSet& a, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) fail(ErrorKind::Domain, "take_fraction: rho outside [0,1]");
  if (rho == 0.0) return {};
  if (a.empty()) fail(ErrorKind::Domain, "take_fraction: empty support");
  if (rho == 1.0) return a;
  double want = rho * a.measure();
  std::vector<Interval> out;
  for (const auto& iv : a.intervals()) {
    if (want <= 0.0) break;
    if (iv.length() <= want) {
      out.push_back(iv);
      want -= iv.length();
    } else {
      out.push_back({iv.lo, iv.lo + want});
      want = 0.0;
    }
  }
  return AngleSet(std::move(out));
}

PiecewisePrior::PiecewisePrior(std::vector<PriorPiece> pieces) {
  std::vector<Interval> ivs;
  for (const auto& p : pieces) {
    if (!(p.iv.hi > p.iv.lo)) continue;
    if (!(p.density > 0.0)) fail(ErrorKind::Domain, "prior density must be positive");
    ivs.push_back(p.iv);
    pieces_.push_back(p);
  }
  if (pieces_.empty()) fail(ErrorKind::Domain, "prior has no support");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const PriorPiece& a, const PriorPiece& b) { return a.iv.lo < b.iv.lo; });
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    if (pieces_[i].iv.lo < pieces_[i - 1].iv.hi) fail(ErrorKind::Domain, "prior pieces overlap");
  double total = 0.0;
  for (const auto& p : pieces_) total += p.density * p.iv.length();
  for (auto& p : pieces_) p.density /= total;
  support_ = AngleSet(std::move(ivs));
}

PiecewisePrior PiecewisePrior::uniform(const AngleSet& support) {
  std::vector<PriorPiece> pcs;
  for (const auto& iv : support.intervals()) pcs.push_back({iv, 1.0});
  return PiecewisePrior(std::move(pcs));
}

double PiecewisePrior::mass(const AngleSet& s) const {
  double m = 0.0;
  for (const auto& p : pieces_) m += p.density * intersect(s, AngleSet({p.iv})).measure();
  return m;
}

double PiecewisePrior::density(double theta) const {
  for (const auto& p : pieces_)
    if (theta >= p.iv.lo && theta < p.iv.hi) return p.density;
  return 0.0;
}

bool PiecewisePrior::is_uniform_on(const AngleSet& s) const {
  double d = -1.0;
  for (const auto& p : pieces_) {
    if (intersect(s, AngleSet({p.iv})).empty()) continue;
    if (d < 0.0) d = p.density;
    else if (std::abs(p.density - d) > 1e-12 * d) return false;
  }
  return true;
}

double PiecewisePrior::sample(double u) const {
  double acc = 0.0;
  for (const auto& p : pieces_) {
    double m = p.density * p.iv.length();
    if (u < acc + m) return std::min(p.iv.lo + (u - acc) / p.density, std::nextafter(p.iv.hi, p.iv.lo));
    acc += m;
  }
  const auto& last = pieces_.back().iv;
  return std::nextafter(last.hi, last.lo);
}

AngleSet top_mass_subset(const AngleSet& a, const PiecewisePrior& f, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) fail(ErrorKind::Domain, "top_mass_subset: rho outside [0,1]");
  if (rho == 0.0) return {};
  if (rho == 1.0) return a;
  struct Cell { Interval iv; double density; };
  std::vector<Cell> cells;
  for (const auto& p : f.pieces()) {
    AngleSet part = intersect(a, AngleSet({p.iv}));
    for (const auto& iv : part.intervals()) cells.push_back({iv, p.density});
  }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
    if (x.density != y.density) return x.density > y.density;
    return x.iv.lo < y.iv.lo;
  });
  // equal-density runs are taken from the lowest angle, which makes the uniform case match take_fraction
  double want = rho * a.measure();
  std::vector<Interval> out;
  for (const auto& c : cells) {
    if (want <= 0.0) break;
    if (c.iv.length() <= want) {
      out.push_back(c.iv);
      want -= c.iv.length();
    } else {
      out.push_back({c.iv.lo, c.iv.lo + want});
      want = 0.0;
    }
  }
  return AngleSet(std::move(out));
}

}  // namespace ba
