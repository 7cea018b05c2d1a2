#include "gaugecalc/cantor.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "gaugecalc/errors.hpp"

namespace gaugecalc {

CantorScheme::CantorScheme(SequenceFn level_length, SequenceFn gap_length,
                           SequenceFn plateau_length, int enumeration_cap)
    : level_length_(std::move(level_length)),
      gap_length_(std::move(gap_length)),
      plateau_length_(std::move(plateau_length)),
      enumeration_cap_(enumeration_cap) {}

CantorScheme CantorScheme::fat() {
  // explicit return types force gmpxx expression templates to materialize
  // before their temporaries go out of scope
  auto level = [](int n) -> Rational { return Rational(n + 4) / (rat_pow2(n + 1) * (n + 2)); };
  auto gap = [](int n) -> Rational { return Rational(1) / (rat_pow2(n) * (n + 2) * (n + 3)); };
  auto plateau = [gap](int n) -> Rational { return gap(n) / 2; };
  return CantorScheme(level, gap, plateau);
}

Rational CantorScheme::level_length(int n) const {
  if (n < 0) throw std::invalid_argument("CantorScheme: negative level");
  return level_length_(n);
}

Rational CantorScheme::gap_length(int n) const {
  if (n < 0) throw std::invalid_argument("CantorScheme: negative level");
  return gap_length_(n);
}

Rational CantorScheme::plateau_length(int n) const {
  if (n < 0) throw std::invalid_argument("CantorScheme: negative level");
  return plateau_length_(n);
}

Rational level_measure(const CantorScheme& s, int n) {
  return rat_pow2(n) * s.level_length(n);
}

std::vector<RatInterval> cantor_level_intervals(const CantorScheme& s, int n) {
  if (n < 0) throw std::invalid_argument("cantor_level_intervals: negative level");
  if (n > s.enumeration_cap()) {
    throw resource_error("cantor_level_intervals: level " + std::to_string(n) +
                         " exceeds enumeration cap " + std::to_string(s.enumeration_cap()));
  }
  std::vector<RatInterval> current{RatInterval{Rational(0), Rational(1)}};
  for (int m = 0; m < n; ++m) {
    const Rational child = s.level_length(m + 1);
    std::vector<RatInterval> next;
    next.reserve(current.size() * 2);
    for (const RatInterval& iv : current) {
      next.push_back(RatInterval{iv.lo, iv.lo + child});
      next.push_back(RatInterval{iv.hi - child, iv.hi});
    }
    current = std::move(next);
  }
  return current;
}

namespace {

void check_address(const CantorScheme& s, const GapAddress& a) {
  if (a.level < 0) throw std::invalid_argument("GapAddress: negative level");
  if (a.level > s.enumeration_cap() + 40) {
    throw resource_error("GapAddress: level beyond supported depth");
  }
  const std::int64_t count = a.level >= 62 ? 0 : (std::int64_t{1} << a.level);
  if (a.level >= 62 || a.index < 1 || a.index > count) {
    throw std::invalid_argument("GapAddress: index out of range for level");
  }
}

}  // namespace

RatInterval cantor_level_interval(const CantorScheme& s, const GapAddress& a) {
  check_address(s, a);
  RatInterval iv{Rational(0), Rational(1)};
  // Bits of (index-1), most significant first, select left/right children.
  for (int m = 0; m < a.level; ++m) {
    const Rational child = s.level_length(m + 1);
    const bool right = ((a.index - 1) >> (a.level - 1 - m)) & 1;
    if (right) {
      iv = RatInterval{iv.hi - child, iv.hi};
    } else {
      iv = RatInterval{iv.lo, iv.lo + child};
    }
  }
  return iv;
}

GapGeometry gap_intervals(const CantorScheme& s, const GapAddress& a) {
  const RatInterval parent = cantor_level_interval(s, a);
  const Rational c = parent.midpoint();
  const Rational half_gap = s.gap_length(a.level) / 2;
  const Rational half_plateau = s.plateau_length(a.level) / 2;
  return GapGeometry{RatInterval{c - half_gap, c + half_gap},
                     RatInterval{c - half_plateau, c + half_plateau}};
}

namespace {

PointClassification classify_impl(const CantorScheme& s, const Rational& x, int max_depth) {
  if (x < 0 || x > 1) throw std::domain_error("classify_point: x outside [0,1]");
  RatInterval iv{Rational(0), Rational(1)};
  std::int64_t k = 1;
  for (int n = 0; n < max_depth; ++n) {
    const Rational c = iv.midpoint();
    const Rational half_gap = s.gap_length(n) / 2;
    const Rational g_lo = c - half_gap;
    const Rational g_hi = c + half_gap;
    if (x <= g_lo) {
      iv = RatInterval{iv.lo, g_lo};
      k = 2 * k - 1;
    } else if (x >= g_hi) {
      iv = RatInterval{g_hi, iv.hi};
      k = 2 * k;
    } else {
      PointClassification pc;
      pc.gap = GapAddress{n, k};
      const Rational half_plateau = s.plateau_length(n) / 2;
      if (x >= c - half_plateau && x <= c + half_plateau) {
        pc.kind = PointClass::OnPlateau;
      } else {
        pc.kind = PointClass::OnRamp;
        pc.side = x < c ? RampSide::Left : RampSide::Right;
      }
      return pc;
    }
  }
  PointClassification pc;
  pc.kind = PointClass::InPerfectSet;
  pc.depth = max_depth;
  return pc;
}

}  // namespace

PointClassification classify_point(const CantorScheme& s, const Rational& x, int max_depth) {
  return classify_impl(s, x, max_depth);
}

PointClassification classify_point(const CantorScheme& s, double x, int max_depth) {
  return classify_impl(s, rat_from_double(x), max_depth);
}

}  // namespace gaugecalc
