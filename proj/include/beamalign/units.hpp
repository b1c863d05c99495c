#pragma once

#include <cmath>
#include <limits>

namespace ba {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double w) {
  if (!(w > 0.0)) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(w) + 30.0;
}

inline double to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace ba
