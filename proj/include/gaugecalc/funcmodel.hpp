#ifndef GAUGECALC_FUNCMODEL_HPP
#define GAUGECALC_FUNCMODEL_HPP

#include <memory>
#include <optional>
#include <vector>

#include "gaugecalc/cantor.hpp"
#include "gaugecalc/interval.hpp"

namespace gaugecalc {

// Double-precision view of the counterexample variant: per-level geometry
// tables plus the plateau values.  The quadrature module uses this to route
// integrals through the construction's self-similar structure.
struct CantorStructure {
  CantorScheme scheme;
  int depth_cap;          // descent stops here; the function is taken as 0 below
  int sign = 1;           // -1 under a negation wrapper
  bool mirrored = false;  // argument is negated under a reflection wrapper

  // Tables indexed by level, size depth_cap + 1 (geometry) / depth_cap (values).
  std::vector<double> level_len;    // r_n
  std::vector<double> gap_len;      // u_n
  std::vector<double> plateau_len;  // v_n
  std::vector<double> ramp_len;     // (u_n - v_n)/2
  std::vector<double> value;        // plateau value at level n

  explicit CantorStructure(CantorScheme s, int cap);
};

// Plateau value convention: (-1)^n/n for n >= 1; the level-0 plateau takes -1
// (the rule is singular at n = 0 and -1 extends it continuously).
double cantor_plateau_value(int n);

// Evaluates the tent-on-gaps function for x in [0,1] by double-precision
// descent: exact on gap pieces resolved above the depth cap, 0 otherwise
// (absolute error at most 1/depth_cap for unresolved points).
double cantor_eval(const CantorStructure& cs, double x);

struct AffinePiece {
  double slope = 0;  // the model's value at any point comes from eval()
};

namespace detail {
class FunctionImpl;
}

// Evaluatable real function on a closed interval with registered breakpoints.
// Immutable after construction; cheap to copy.
class FunctionModel {
public:
  enum class Kind { PiecewiseLinear, Polynomial, ScaledPower, Counterexample, Negation, Reflection };

  // Breakpoints xs strictly increasing (>= 2 of them); domain is [xs.front(), xs.back()].
  static FunctionModel piecewise_linear(std::vector<double> xs, std::vector<double> ys);

  // coeffs[k] multiplies x^k.
  static FunctionModel polynomial(Interval domain, std::vector<double> coeffs);

  // scale * |x - center|^exponent, or scale * sign(x-center) * |x-center|^exponent
  // when odd_symmetric is set.  exponent >= 0.
  static FunctionModel scaled_power(Interval domain, double scale, double center,
                                    double exponent, bool odd_symmetric = false);

  // The tent-on-gaps construction over the scheme, on [0,1].  Gap boundaries up
  // to breakpoint_depth levels are registered as quadrature breakpoints; deeper
  // structure is handled by the quadrature module's subdivision.
  static FunctionModel counterexample(const CantorScheme& scheme, int depth_cap = 60,
                                      int breakpoint_depth = 10);

  static FunctionModel negation(FunctionModel inner);

  // Evaluates inner(-x) over the reflected domain.
  static FunctionModel reflection(FunctionModel inner);

  Kind kind() const;
  Interval domain() const;

  // Throws std::domain_error outside the domain.
  double operator()(double x) const;

  // Sorted points where smoothness may fail, interior to the domain.
  const std::vector<double>& breakpoints() const;

  // The affine piece covering [lo, hi] entirely, if the model knows one.
  std::optional<AffinePiece> affine_on(double lo, double hi) const;

  // Non-null when the model is the counterexample, possibly wrapped.
  const CantorStructure* cantor_structure() const;

private:
  explicit FunctionModel(std::shared_ptr<const detail::FunctionImpl> impl);
  std::shared_ptr<const detail::FunctionImpl> impl_;
};

}  // namespace gaugecalc

#endif
