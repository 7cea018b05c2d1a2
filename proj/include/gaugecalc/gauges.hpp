#ifndef GAUGECALC_GAUGES_HPP
#define GAUGECALC_GAUGES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "gaugecalc/quadrature.hpp"

namespace gaugecalc {

// Strictly positive function on a point set; controls admissible interval
// sizes around each tag.
class Gauge {
public:
  static Gauge constant(double value);

  // values.size() == breakpoints.size() + 1; value i applies on
  // [breakpoints[i-1], breakpoints[i]).
  static Gauge piecewise_constant(std::vector<double> breakpoints, std::vector<double> values);

  static Gauge pointwise(std::function<double(double)> fn,
                         std::function<bool(double)> defined_on = {});

  bool defined_at(double x) const;

  // Throws std::invalid_argument when undefined at x or when the callable
  // returns a non-positive value.
  double operator()(double x) const;

  std::string describe() const;

private:
  Gauge() = default;
  enum class Kind { Constant, PiecewiseConstant, Pointwise };
  Kind kind_ = Kind::Constant;
  double value_ = 1.0;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::function<double(double)> fn_;
  std::function<bool(double)> defined_on_;
};

struct TaggedInterval {
  Interval interval;
  double tag;  // must lie in the interval

  TaggedInterval(Interval iv, double t);
};

// Finite collection of tagged intervals.  Pairwise nonoverlap and tiling are
// checked by predicates rather than enforced, so partitions read from files
// can be inspected and reported on.
class TaggedPartition {
public:
  TaggedPartition() = default;
  explicit TaggedPartition(std::vector<TaggedInterval> items);

  const std::vector<TaggedInterval>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  double total_length() const;

  // Interiors pairwise disjoint.
  bool nonoverlapping() const;

  // Sorted intervals chain exactly from domain.lo to domain.hi.
  bool tiles(const Interval& domain) const;

private:
  std::vector<TaggedInterval> items_;
};

// Strict inclusion I ⊂ (tag - δ(tag), tag + δ(tag)) for every item.
// Throws std::invalid_argument when the gauge is undefined at some tag.
bool is_fine(const TaggedPartition& p, const Gauge& g);

// Cousin-style bisection: splits [domain] dyadically until each piece is
// shorter than the gauge at its midpoint, which is then its tag.  The result
// tiles the domain exactly.  Throws resource_error (naming a witness
// subinterval) when max_depth is exceeded.
TaggedPartition cousin_partition(const Interval& domain, const Gauge& g, int max_depth = 48);

// Σ_i ((1/|I_i|) ∫_{I_i} |F(y) - F(x_i) - f(x_i)(y - x_i)|^r dy)^{1/r}.
double riemann_lr_sum(const TaggedPartition& p, const FunctionModel& F, const FunctionModel& f,
                      double r, const QuadratureOptions& opts = {});

// Σ_i ((1/|I_i|) ∫_{I_i} |F(y) - F(x_i)|^r dy)^{1/r}.
double ac_sum(const TaggedPartition& p, const FunctionModel& F, double r,
              const QuadratureOptions& opts = {});

// Searches for a δ-fine partition tagged in E with total length below eta and
// a large ac_sum.  Heuristic and deterministic for a fixed seed; a returned
// partition always satisfies the stated constraints (callers re-evaluate its
// sum), but failure to find a large one proves nothing.
TaggedPartition adversarial_small_partition(const std::vector<double>& tags, const Gauge& g,
                                            double eta, const FunctionModel& F, double r,
                                            long budget = 10000, std::uint64_t seed = 0);

}  // namespace gaugecalc

#endif
