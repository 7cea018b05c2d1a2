#ifndef GAUGECALC_INTERVAL_HPP
#define GAUGECALC_INTERVAL_HPP

#include <cmath>
#include <stdexcept>

#include "gaugecalc/rational.hpp"

namespace gaugecalc {

// Non-degenerate closed interval [lo, hi], lo < hi.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("Interval: requires finite lo < hi");
    }
  }

  double length() const { return hi - lo; }
  double midpoint() const { return (lo + hi) / 2; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
};

// Exact-rational closed interval, used by the Cantor-scheme geometry.
struct RatInterval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const RatInterval& other) const { return lo <= other.lo && other.hi <= hi; }

  Interval to_interval() const { return Interval(rat_to_double(lo), rat_to_double(hi)); }
};

}  // namespace gaugecalc

#endif
