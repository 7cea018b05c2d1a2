#include "gaugecalc/funcmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gaugecalc/errors.hpp"

namespace gaugecalc {

double cantor_plateau_value(int n) {
  if (n <= 0) return -1.0;
  return (n % 2 == 0 ? 1.0 : -1.0) / n;
}

CantorStructure::CantorStructure(CantorScheme s, int cap) : scheme(std::move(s)), depth_cap(cap) {
  if (cap < 1 || cap > 60) {
    throw std::invalid_argument("CantorStructure: depth cap must be in [1, 60]");
  }
  level_len.resize(cap + 1);
  gap_len.resize(cap);
  plateau_len.resize(cap);
  ramp_len.resize(cap);
  value.resize(cap);
  for (int n = 0; n <= cap; ++n) level_len[n] = rat_to_double(scheme.level_length(n));
  for (int n = 0; n < cap; ++n) {
    gap_len[n] = rat_to_double(scheme.gap_length(n));
    plateau_len[n] = rat_to_double(scheme.plateau_length(n));
    ramp_len[n] = rat_to_double((scheme.gap_length(n) - scheme.plateau_length(n)) / 2);
    value[n] = cantor_plateau_value(n);
  }
}

double cantor_eval(const CantorStructure& cs, double x) {
  double a = 0.0;
  for (int n = 0; n < cs.depth_cap; ++n) {
    const double len = cs.level_len[n];
    const double g_lo = a + cs.level_len[n + 1];
    const double g_hi = a + len - cs.level_len[n + 1];
    if (x <= g_lo) {
      // left child keeps the same anchor
    } else if (x >= g_hi) {
      a = a + len - cs.level_len[n + 1];
    } else {
      const double p_lo = g_lo + cs.ramp_len[n];
      const double p_hi = g_hi - cs.ramp_len[n];
      const double val = cs.value[n];
      if (x >= p_lo && x <= p_hi) return val;
      if (x < p_lo) return val * ((x - g_lo) / cs.ramp_len[n]);
      return val * ((g_hi - x) / cs.ramp_len[n]);
    }
  }
  return 0.0;
}

namespace detail {

class FunctionImpl {
public:
  FunctionImpl(FunctionModel::Kind kind, Interval domain)
      : kind_(kind), domain_(domain) {}
  virtual ~FunctionImpl() = default;

  FunctionModel::Kind kind() const { return kind_; }
  const Interval& domain() const { return domain_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  virtual double eval(double x) const = 0;
  virtual std::optional<AffinePiece> affine_on(double lo, double hi) const = 0;
  virtual const CantorStructure* cantor_structure() const { return nullptr; }

protected:
  FunctionModel::Kind kind_;
  Interval domain_;
  std::vector<double> breakpoints_;
};

namespace {

class PiecewiseLinearImpl final : public FunctionImpl {
public:
  PiecewiseLinearImpl(std::vector<double> xs, std::vector<double> ys)
      : FunctionImpl(FunctionModel::Kind::PiecewiseLinear, Interval(xs.front(), xs.back())),
        xs_(std::move(xs)),
        ys_(std::move(ys)) {
    breakpoints_.assign(xs_.begin() + 1, xs_.end() - 1);
  }

  double eval(double x) const override {
    const std::size_t i = segment_index(x);
    if (x == xs_[i]) return ys_[i];
    const double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return ys_[i] + t * (ys_[i + 1] - ys_[i]);
  }

  std::optional<AffinePiece> affine_on(double lo, double hi) const override {
    const std::size_t i = segment_index(lo);
    if (hi <= xs_[i + 1]) {
      return AffinePiece{(ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i])};
    }
    return std::nullopt;
  }

private:
  std::size_t segment_index(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (i + 1 >= xs_.size()) i = xs_.size() - 2;
    return i;
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
};

class PolynomialImpl final : public FunctionImpl {
public:
  PolynomialImpl(Interval domain, std::vector<double> coeffs)
      : FunctionImpl(FunctionModel::Kind::Polynomial, domain), coeffs_(std::move(coeffs)) {}

  double eval(double x) const override {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
  }

  std::optional<AffinePiece> affine_on(double, double) const override {
    if (coeffs_.size() <= 2) return AffinePiece{coeffs_.size() == 2 ? coeffs_[1] : 0.0};
    return std::nullopt;
  }

private:
  std::vector<double> coeffs_;
};

class ScaledPowerImpl final : public FunctionImpl {
public:
  ScaledPowerImpl(Interval domain, double scale, double center, double exponent, bool odd)
      : FunctionImpl(FunctionModel::Kind::ScaledPower, domain),
        scale_(scale),
        center_(center),
        exponent_(exponent),
        odd_(odd) {
    if (domain.lo < center && center < domain.hi) breakpoints_.push_back(center);
  }

  double eval(double x) const override {
    const double d = x - center_;
    const double mag = std::pow(std::abs(d), exponent_);
    if (odd_ && d < 0) return -scale_ * mag;
    return scale_ * mag;
  }

  std::optional<AffinePiece> affine_on(double lo, double hi) const override {
    if (exponent_ == 1.0) {
      if (odd_) return AffinePiece{scale_};
      if (hi <= center_) return AffinePiece{-scale_};
      if (lo >= center_) return AffinePiece{scale_};
      return std::nullopt;
    }
    if (exponent_ == 0.0) return AffinePiece{0.0};
    return std::nullopt;
  }

private:
  double scale_;
  double center_;
  double exponent_;
  bool odd_;
};

class CounterexampleImpl final : public FunctionImpl {
public:
  CounterexampleImpl(const CantorScheme& scheme, int depth_cap, int breakpoint_depth)
      : FunctionImpl(FunctionModel::Kind::Counterexample, Interval(0.0, 1.0)),
        structure_(scheme, depth_cap) {
    if (breakpoint_depth < 0 || breakpoint_depth > 20) {
      throw std::invalid_argument("counterexample: breakpoint depth must be in [0, 20]");
    }
    register_breakpoints(std::min(breakpoint_depth, depth_cap));
  }

  double eval(double x) const override { return cantor_eval(structure_, x); }

  std::optional<AffinePiece> affine_on(double lo, double hi) const override {
    double a = 0.0;
    for (int n = 0; n < structure_.depth_cap; ++n) {
      const double len = structure_.level_len[n];
      const double g_lo = a + structure_.level_len[n + 1];
      const double g_hi = a + len - structure_.level_len[n + 1];
      if (hi <= g_lo) continue;  // left child, same anchor
      if (lo >= g_hi) {
        a = a + len - structure_.level_len[n + 1];
        continue;
      }
      if (lo < g_lo || hi > g_hi) return std::nullopt;  // straddles a gap boundary
      const double p_lo = g_lo + structure_.ramp_len[n];
      const double p_hi = g_hi - structure_.ramp_len[n];
      const double val = structure_.value[n];
      if (lo >= p_lo && hi <= p_hi) return AffinePiece{0.0};
      if (hi <= p_lo) return AffinePiece{val / structure_.ramp_len[n]};
      if (lo >= p_hi) return AffinePiece{-val / structure_.ramp_len[n]};
      return std::nullopt;
    }
    return AffinePiece{0.0};  // inside a depth-cap interval the model evaluates to 0
  }

  const CantorStructure* cantor_structure() const override { return &structure_; }

private:
  void register_breakpoints(int depth) {
    struct Node {
      double a;
      int level;
    };
    std::vector<Node> stack{{0.0, 0}};
    while (!stack.empty()) {
      const Node node = stack.back();
      stack.pop_back();
      if (node.level >= depth) continue;
      const int n = node.level;
      const double len = structure_.level_len[n];
      const double g_lo = node.a + structure_.level_len[n + 1];
      const double g_hi = node.a + len - structure_.level_len[n + 1];
      breakpoints_.push_back(g_lo);
      breakpoints_.push_back(g_lo + structure_.ramp_len[n]);
      breakpoints_.push_back(g_hi - structure_.ramp_len[n]);
      breakpoints_.push_back(g_hi);
      stack.push_back({node.a, n + 1});
      stack.push_back({g_hi, n + 1});
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
  }

  CantorStructure structure_;
};

class NegationImpl final : public FunctionImpl {
public:
  explicit NegationImpl(std::shared_ptr<const FunctionImpl> inner)
      : FunctionImpl(FunctionModel::Kind::Negation, inner->domain()), inner_(std::move(inner)) {
    breakpoints_ = inner_->breakpoints();
    if (const CantorStructure* cs = inner_->cantor_structure()) {
      structure_ = std::make_unique<CantorStructure>(*cs);
      structure_->sign = -structure_->sign;
    }
  }

  double eval(double x) const override { return -inner_->eval(x); }

  std::optional<AffinePiece> affine_on(double lo, double hi) const override {
    if (auto piece = inner_->affine_on(lo, hi)) return AffinePiece{-piece->slope};
    return std::nullopt;
  }

  const CantorStructure* cantor_structure() const override { return structure_.get(); }

private:
  std::shared_ptr<const FunctionImpl> inner_;
  std::unique_ptr<CantorStructure> structure_;
};

class ReflectionImpl final : public FunctionImpl {
public:
  explicit ReflectionImpl(std::shared_ptr<const FunctionImpl> inner)
      : FunctionImpl(FunctionModel::Kind::Reflection,
                     Interval(-inner->domain().hi, -inner->domain().lo)),
        inner_(std::move(inner)) {
    const auto& bp = inner_->breakpoints();
    breakpoints_.reserve(bp.size());
    for (auto it = bp.rbegin(); it != bp.rend(); ++it) breakpoints_.push_back(-*it);
    if (const CantorStructure* cs = inner_->cantor_structure()) {
      structure_ = std::make_unique<CantorStructure>(*cs);
      structure_->mirrored = !structure_->mirrored;
    }
  }

  double eval(double x) const override { return inner_->eval(-x); }

  std::optional<AffinePiece> affine_on(double lo, double hi) const override {
    if (auto piece = inner_->affine_on(-hi, -lo)) return AffinePiece{-piece->slope};
    return std::nullopt;
  }

  const CantorStructure* cantor_structure() const override { return structure_.get(); }

private:
  std::shared_ptr<const FunctionImpl> inner_;
  std::unique_ptr<CantorStructure> structure_;
};

}  // namespace
}  // namespace detail

FunctionModel::FunctionModel(std::shared_ptr<const detail::FunctionImpl> impl)
    : impl_(std::move(impl)) {}

FunctionModel FunctionModel::piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw std::invalid_argument("piecewise_linear: need matching xs/ys with at least 2 points");
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i] < xs[i + 1])) {
      throw std::invalid_argument("piecewise_linear: breakpoints must be strictly increasing");
    }
  }
  for (double y : ys) {
    if (!std::isfinite(y)) throw std::invalid_argument("piecewise_linear: nonfinite value");
  }
  return FunctionModel(
      std::make_shared<detail::PiecewiseLinearImpl>(std::move(xs), std::move(ys)));
}

FunctionModel FunctionModel::polynomial(Interval domain, std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  return FunctionModel(std::make_shared<detail::PolynomialImpl>(domain, std::move(coeffs)));
}

FunctionModel FunctionModel::scaled_power(Interval domain, double scale, double center,
                                          double exponent, bool odd_symmetric) {
  if (exponent < 0) throw std::invalid_argument("scaled_power: exponent must be >= 0");
  return FunctionModel(
      std::make_shared<detail::ScaledPowerImpl>(domain, scale, center, exponent, odd_symmetric));
}

FunctionModel FunctionModel::counterexample(const CantorScheme& scheme, int depth_cap,
                                            int breakpoint_depth) {
  return FunctionModel(
      std::make_shared<detail::CounterexampleImpl>(scheme, depth_cap, breakpoint_depth));
}

FunctionModel FunctionModel::negation(FunctionModel inner) {
  return FunctionModel(std::make_shared<detail::NegationImpl>(std::move(inner.impl_)));
}

FunctionModel FunctionModel::reflection(FunctionModel inner) {
  return FunctionModel(std::make_shared<detail::ReflectionImpl>(std::move(inner.impl_)));
}

FunctionModel::Kind FunctionModel::kind() const { return impl_->kind(); }

Interval FunctionModel::domain() const { return impl_->domain(); }

double FunctionModel::operator()(double x) const {
  if (!impl_->domain().contains(x)) {
    throw std::domain_error("FunctionModel: evaluation outside the domain");
  }
  return impl_->eval(x);
}

const std::vector<double>& FunctionModel::breakpoints() const { return impl_->breakpoints(); }

std::optional<AffinePiece> FunctionModel::affine_on(double lo, double hi) const {
  if (!(lo < hi)) throw std::invalid_argument("affine_on: requires lo < hi");
  if (!impl_->domain().contains(lo) || !impl_->domain().contains(hi)) return std::nullopt;
  return impl_->affine_on(lo, hi);
}

const CantorStructure* FunctionModel::cantor_structure() const {
  return impl_->cantor_structure();
}

}  // namespace gaugecalc
