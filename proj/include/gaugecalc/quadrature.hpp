#ifndef GAUGECALC_QUADRATURE_HPP
#define GAUGECALC_QUADRATURE_HPP

#include "gaugecalc/funcmodel.hpp"
#include "gaugecalc/interval.hpp"

namespace gaugecalc {

enum class Side { TwoSided, Right, Left };

// Bracket applied to the deviation g = F(y) - F(x) - alpha (y - x):
// Abs integrates |g|^r, Pos integrates max(g,0)^r, Neg integrates max(-g,0)^r.
enum class Part { Abs, Pos, Neg };

struct LrParams {
  double r = 1.0;
  Side side = Side::TwoSided;
  Part part = Part::Abs;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
  long subdivisions = 0;
};

struct QuadratureOptions {
  double tol = 1e-10;               // absolute, per window
  double rel_tol = 0.0;             // optional relative goal for the structural path
  long max_nodes = 400000;          // subdivision budget
  int gl_max_depth = 44;            // dyadic bisection depth of the fallback rule
  bool closed_form_routing = true;  // exact kernels on affine segments
  bool structural_routing = true;   // self-similar fast path for the counterexample
};

// Exact ∫_{t0}^{t1} |a + b t|^r dt via the antiderivative |u|^r u / (b (r+1)).
// Requires r >= 1 and t0 <= t1.
double affine_power_integral(double a, double b, double r, double t0, double t1);

// Bracket variants of the kernel above.
double affine_bracket_integral(double a, double b, double r, double t0, double t1, Part part);

// g(y) = bracket_part(F(y) - F(x) - alpha (y - x)).
struct IntegrandSpec {
  double x = 0.0;
  double alpha = 0.0;
  Part part = Part::Abs;
};

// ∫_window g(y)^r dy by composite Gauss-Legendre of order 15 with mandatory
// splits at registered breakpoints and dyadic adaptive bisection.  Affine
// segments go through the exact kernel; the counterexample variant is handled
// by recursion over its own interval tree with exact level masses.  When the
// budget runs out the result is returned with error_estimate > tol.
QuadratureResult adaptive_lr_integral(const FunctionModel& F, const Interval& window,
                                      const IntegrandSpec& spec, double r,
                                      const QuadratureOptions& opts = {});

// ((1/h) ∫ g^r)^{1/r} over the window picked by p.side: (x, x+h] for Right,
// [x-h, x) for Left, [x-h, x+h] for TwoSided (the 1/h normalization is used
// for every side).  Throws std::invalid_argument for h <= 0 and
// std::domain_error when the window escapes the domain.
QuadratureResult lr_mean_deviation(const FunctionModel& F, double x, double alpha, double h,
                                   const LrParams& p, const QuadratureOptions& opts = {});

// x^r with an exact fast path for small integer exponents.
double bracket_pow(double x, double r);

}  // namespace gaugecalc

#endif
