#ifndef GAUGECALC_CANTOR_HPP
#define GAUGECALC_CANTOR_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "gaugecalc/interval.hpp"
#include "gaugecalc/rational.hpp"

namespace gaugecalc {

// Identifies the open gap removed from the k-th level-n interval (k is 1-based).
struct GapAddress {
  int level = 0;
  std::int64_t index = 1;
};

enum class PointClass { InPerfectSet, OnPlateau, OnRamp };
enum class RampSide { Left, Right };

struct PointClassification {
  PointClass kind = PointClass::InPerfectSet;
  int depth = 0;                    // levels descended when kind == InPerfectSet
  GapAddress gap{};                 // set for OnPlateau / OnRamp
  RampSide side = RampSide::Left;   // set for OnRamp
};

// Symmetric Cantor-like construction on [0,1]: at each level n every remaining
// closed interval (length r_n) loses a concentric open gap (length u_n), leaving
// two closed children of length r_{n+1} = (r_n - u_n)/2.  Each gap carries a
// concentric plateau interval of length v_n.  All geometry is exact rational.
class CantorScheme {
public:
  using SequenceFn = std::function<Rational(int)>;

  CantorScheme(SequenceFn level_length, SequenceFn gap_length, SequenceFn plateau_length,
               int enumeration_cap = 22);

  // The shipped instance: r_n = (n+4)/(2^{n+1}(n+2)), u_n = 1/(2^n(n+2)(n+3)),
  // v_n = u_n/2.  The leftover perfect set is "fat" (Lebesgue measure 1/2).
  static CantorScheme fat();

  Rational level_length(int n) const;    // r_n
  Rational gap_length(int n) const;      // u_n
  Rational plateau_length(int n) const;  // v_n

  int enumeration_cap() const { return enumeration_cap_; }
  RatInterval domain() const { return RatInterval{Rational(0), Rational(1)}; }

private:
  SequenceFn level_length_;
  SequenceFn gap_length_;
  SequenceFn plateau_length_;
  int enumeration_cap_;
};

// 2^n * r_n, exact.
Rational level_measure(const CantorScheme& s, int n);

// The 2^n closed level-n intervals in increasing order.
// Throws resource_error when n exceeds the scheme's enumeration cap.
std::vector<RatInterval> cantor_level_intervals(const CantorScheme& s, int n);

// The k-th level-n interval located by binary descent (no full enumeration).
RatInterval cantor_level_interval(const CantorScheme& s, const GapAddress& a);

struct GapGeometry {
  RatInterval gap;      // u_{n,k}, concentric to its parent level interval
  RatInterval plateau;  // v_{n,k}, concentric to the gap
};

// Throws std::invalid_argument for k outside [1, 2^n].
GapGeometry gap_intervals(const CantorScheme& s, const GapAddress& a);

// Descends the interval tree from [0,1]; reports the first gap containing x,
// or InPerfectSet(max_depth) if no gap is hit within max_depth levels.
// Plateaus are taken closed, ramps half-open.  Requires 0 <= x <= 1.
PointClassification classify_point(const CantorScheme& s, const Rational& x, int max_depth);
PointClassification classify_point(const CantorScheme& s, double x, int max_depth);

}  // namespace gaugecalc

#endif
