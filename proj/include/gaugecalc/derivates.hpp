#ifndef GAUGECALC_DERIVATES_HPP
#define GAUGECALC_DERIVATES_HPP

#include <functional>
#include <utility>
#include <vector>

#include "gaugecalc/quadrature.hpp"

namespace gaugecalc {

enum class Verdict { Converges, Diverges, Inconclusive };

// Geometric ladder of window scales h_k = h0 q^k, clipped so every window
// stays inside the domain.  h0 == 0 selects the default
// min(0.1, available room)/2.  Explicit scales override generation.
struct HGrid {
  double h0 = 0.0;
  double q = 0.5;
  int count = 20;
  std::vector<double> explicit_scales;

  static HGrid geometric(double h0, double q, int count);
  static HGrid from_scales(std::vector<double> scales);

  // Usable scales at x for the given side, largest first.
  std::vector<double> scales_at(const Interval& domain, double x, Side side) const;
};

// Classification compares ratios on a log scale, so estimator probes settle
// for percent-level relative accuracy on the structural quadrature path.
inline QuadratureOptions estimator_quadrature_defaults() {
  QuadratureOptions q;
  q.rel_tol = 1e-2;
  q.max_nodes = 8000;
  return q;
}

struct EstimatorOptions {
  double alpha_tol = 1e-8;
  double alpha_limit = 1e6;           // beyond this the search reports an infinity marker
  double slope_threshold = 0.5;       // log-log slope required for a converging verdict
  double ratio_threshold_factor = 1e-3;
  double agreement_tol = 1e-5;        // four-derivate agreement
  QuadratureOptions quad = estimator_quadrature_defaults();
};

struct DerivateEstimate {
  double value = 0.0;  // +-infinity when no bracketing slope exists within limits
  std::vector<std::pair<double, double>> diagnostics;  // (h, phi/h) at the reported slope
  double trend_slope = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

struct DerivativeEstimate {
  double value = 0.0;
  std::vector<std::pair<double, double>> residual_ratios;  // (h, phi(alpha*)/h)
  std::vector<double> alpha_trace;
  double trend_slope = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

// lr_mean_deviation scaled by 1/h: the quantity that must vanish as h -> 0
// for the chosen slope alpha to witness differentiability.
double phi_ratio(const FunctionModel& F, double x, double alpha, double h, const LrParams& p,
                 const QuadratureOptions& opts = {});

// Least-squares trend of log(ratio) against log(h) plus the verdict rules:
// converging needs slope above the threshold and a small final ratio;
// diverging needs the running minimum of the ratios to grow along the grid.
struct RatioTrend {
  Verdict verdict = Verdict::Inconclusive;
  double slope = 0.0;
};
RatioTrend classify_ratio_trend(const std::vector<std::pair<double, double>>& diagnostics,
                                double alpha_scale, const EstimatorOptions& opts = {});

// Minimizes the convex map alpha -> Phi_h(alpha) (two-sided absolute part; at a
// domain endpoint the available side is used) by golden section at every grid
// scale, then classifies the residual ratios.
DerivativeEstimate lr_derivative(const FunctionModel& F, double x, double r, const HGrid& grid,
                                 const EstimatorOptions& opts = {});

enum class DerivateKind { UpperRight, LowerRight, UpperLeft, LowerLeft };

// Bisection over candidate slopes: upper derivates return the least slope whose
// bracketed deviation converges, lower derivates the greatest (to alpha_tol).
DerivateEstimate one_sided_derivate(const FunctionModel& F, double x, double r,
                                    DerivateKind which, const HGrid& grid,
                                    const EstimatorOptions& opts = {});

struct FourDerivates {
  DerivateEstimate upper_right;
  DerivateEstimate lower_right;
  DerivateEstimate upper_left;
  DerivateEstimate lower_left;
  bool all_equal = false;  // all four finite and within agreement_tol
  double spread = 0.0;
};

FourDerivates four_derivates(const FunctionModel& F, double x, double r, const HGrid& grid,
                             const EstimatorOptions& opts = {});

// Measurable set with a point sampler, for approximate-derivative estimation.
struct DensitySet {
  std::function<bool(double)> contains;
  std::function<std::vector<double>(double lo, double hi)> sample;
};

// The whole line, sampled on a uniform grid of the window.
DensitySet dense_reals(int points_per_window = 41);

// Points satisfying a predicate, sampled by filtering a uniform grid.
DensitySet dense_predicate(std::function<bool(double)> predicate, int points_per_window = 81);

// The perfect residual set of the scheme: membership by exact classification,
// sampling by collecting level-interval endpoints inside the window.
DensitySet cantor_perfect_set(const CantorScheme& scheme, int depth = 40, int max_points = 64);

// Difference quotients restricted to the density set; the value is the median
// of quotients at the finest usable scale.
DerivativeEstimate approx_derivative(const FunctionModel& F, double x, const DensitySet& set,
                                     const HGrid& grid, const EstimatorOptions& opts = {});

}  // namespace gaugecalc

#endif
