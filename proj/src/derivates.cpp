#include "gaugecalc/derivates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace gaugecalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deviations at or below roundoff scale are treated as exact zeros so that
// floating-point noise in an otherwise perfect fit is not mistaken for growth.
// The integrand mixes magnitudes up to |F(x)| + |alpha| (|x| + h); a few ulps
// of that scale bound the additive noise, while genuinely small deviations are
// computed with relative accuracy and must stay visible.
double phi_floor(double f_at_x, double alpha, double x, double h) {
  return 2e-15 * (1.0 + std::abs(f_at_x) + std::abs(alpha) * (std::abs(x) + h));
}

double available_room(const Interval& dom, double x, Side side) {
  switch (side) {
    case Side::Right:
      return dom.hi - x;
    case Side::Left:
      return x - dom.lo;
    case Side::TwoSided:
      return std::min(dom.hi - x, x - dom.lo);
  }
  return 0.0;
}

}  // namespace

HGrid HGrid::geometric(double h0, double q, int count) {
  HGrid g;
  g.h0 = h0;
  g.q = q;
  g.count = count;
  return g;
}

HGrid HGrid::from_scales(std::vector<double> scales) {
  HGrid g;
  g.explicit_scales = std::move(scales);
  return g;
}

std::vector<double> HGrid::scales_at(const Interval& domain, double x, Side side) const {
  if (!domain.contains(x)) throw std::domain_error("HGrid: x outside the domain");
  const double room = available_room(domain, x, side);
  std::vector<double> out;
  if (!explicit_scales.empty()) {
    out = explicit_scales;
    std::sort(out.begin(), out.end(), std::greater<double>());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase_if(out, [&](double h) { return !(h > 0.0) || h > room; });
    return out;
  }
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("HGrid: q must be in (0,1)");
  if (count < 3) throw std::invalid_argument("HGrid: count must be at least 3");
  double h = h0 > 0 ? h0 : std::min(0.1, room) / 2;
  for (int k = 0; k < count; ++k, h *= q) {
    if (h > 0.0 && h <= room) out.push_back(h);
  }
  return out;
}

double phi_ratio(const FunctionModel& F, double x, double alpha, double h, const LrParams& p,
                 const QuadratureOptions& opts) {
  return lr_mean_deviation(F, x, alpha, h, p, opts).value / h;
}

RatioTrend classify_ratio_trend(const std::vector<std::pair<double, double>>& diagnostics,
                                double alpha_scale, const EstimatorOptions& opts) {
  RatioTrend out;
  if (diagnostics.empty()) return out;
  const double ratio_floor = 1e-12 * (1.0 + std::abs(alpha_scale));
  const double threshold = opts.ratio_threshold_factor * (1.0 + std::abs(alpha_scale));

  std::vector<std::pair<double, double>> logs;  // (log h, log ratio)
  for (const auto& [h, ratio] : diagnostics) {
    if (ratio > ratio_floor) logs.emplace_back(std::log(h), std::log(ratio));
  }
  const double final_ratio = diagnostics.back().second;

  if (logs.empty()) {
    out.verdict = Verdict::Converges;
    out.slope = kInf;
    return out;
  }
  if (logs.size() < 3) {
    out.verdict = final_ratio <= ratio_floor ? Verdict::Converges : Verdict::Inconclusive;
    out.slope = kInf;
    return out;
  }

  auto fit_slope = [](const std::vector<std::pair<double, double>>& pts) {
    double mx = 0, my = 0;
    for (const auto& [lx, ly] : pts) {
      mx += lx;
      my += ly;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0, sxy = 0;
    for (const auto& [lx, ly] : pts) {
      sxx += (lx - mx) * (lx - mx);
      sxy += (lx - mx) * (ly - my);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
  };
  out.slope = fit_slope(logs);

  // A slope fit over the whole ladder can hide flattening at the finest
  // scales, which is exactly how a slightly-too-small candidate slope looks;
  // require the decay to persist over the finest points as well.
  double tail_slope = out.slope;
  if (logs.size() >= 5) {
    const std::size_t tail = std::min<std::size_t>(8, logs.size());
    tail_slope = fit_slope({logs.end() - static_cast<std::ptrdiff_t>(tail), logs.end()});
  }
  bool persistent = true;
  if (logs.size() >= 4) {
    const auto& mid = logs[logs.size() * 3 / 5];
    const auto& last = logs.back();
    persistent = last.second <=
                 std::log(2.0) + mid.second + opts.slope_threshold * (last.first - mid.first);
  }

  if (out.slope > opts.slope_threshold && tail_slope > opts.slope_threshold && persistent &&
      final_ratio < threshold) {
    out.verdict = Verdict::Converges;
    return out;
  }

  const std::size_t half = diagnostics.size() / 2;
  double first_min = kInf, second_min = kInf;
  for (std::size_t i = 0; i < diagnostics.size(); ++i) {
    (i < half ? first_min : second_min) = std::min(i < half ? first_min : second_min,
                                                   diagnostics[i].second);
  }
  if (second_min > first_min && final_ratio > threshold) {
    out.verdict = Verdict::Diverges;
    return out;
  }
  out.verdict = Verdict::Inconclusive;
  return out;
}

namespace {

struct PhiMinimum {
  double alpha = 0.0;
  double phi = 0.0;
  bool bracketed = false;
};

// Golden-section minimum of alpha -> Phi_h(alpha); the bracket is grown from
// the difference quotient until the middle point is lowest.
PhiMinimum minimize_phi(const FunctionModel& F, double x, double r, double h, Side side,
                        const EstimatorOptions& opts) {
  const LrParams params{r, side, Part::Abs};
  auto phi = [&](double alpha) { return lr_mean_deviation(F, x, alpha, h, params, opts.quad).value; };

  double d = 0.0;
  switch (side) {
    case Side::TwoSided:
      d = (F(x + h) - F(x - h)) / (2 * h);
      break;
    case Side::Right:
      d = (F(x + h) - F(x)) / h;
      break;
    case Side::Left:
      d = (F(x) - F(x - h)) / h;
      break;
  }

  double w = std::max(1.0, std::abs(d));
  double a = d - w, m = d, b = d + w;
  double fa = phi(a), fm = phi(m), fb = phi(b);
  PhiMinimum out;
  bool bracketed = false;
  for (int guard = 0; guard < 60; ++guard) {
    if (fa <= fm) {
      b = m;
      fb = fm;
      m = a;
      fm = fa;
      w *= 2;
      a = a - w;
      fa = phi(a);
      continue;
    }
    if (fb <= fm) {
      a = m;
      fa = fm;
      m = b;
      fm = fb;
      w *= 2;
      b = b + w;
      fb = phi(b);
      continue;
    }
    bracketed = true;
    break;
  }
  if (!bracketed) {
    out.alpha = d;
    out.phi = phi(d);
    out.bracketed = false;
    return out;
  }

  constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt 5)/2
  for (int iter = 0; iter < 200; ++iter) {
    if (b - a < std::max(opts.alpha_tol, 1e-12 * (1.0 + std::abs(m)))) break;
    const bool split_right = (b - m) > (m - a);
    const double t = split_right ? m + kGolden * (b - m) : m - kGolden * (m - a);
    const double ft = phi(t);
    if (ft < fm || (ft == fm && split_right == (b - m > m - a))) {
      if (t > m) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
      m = t;
      fm = ft;
    } else {
      if (t > m) {
        b = t;
        fb = ft;
      } else {
        a = t;
        fa = ft;
      }
    }
  }
  out.alpha = m;
  out.phi = fm;
  out.bracketed = true;
  return out;
}

Side pick_two_sided(const Interval& dom, double x) {
  const double left = x - dom.lo;
  const double right = dom.hi - x;
  if (left > 0 && right > 0) return Side::TwoSided;
  return right > 0 ? Side::Right : Side::Left;
}

}  // namespace

DerivativeEstimate lr_derivative(const FunctionModel& F, double x, double r, const HGrid& grid,
                                 const EstimatorOptions& opts) {
  const Interval dom = F.domain();
  const Side side = pick_two_sided(dom, x);
  const std::vector<double> scales = grid.scales_at(dom, x, side);
  if (scales.size() < 3) {
    throw std::invalid_argument("lr_derivative: fewer than 3 usable grid scales at x");
  }

  DerivativeEstimate est;
  const double fx = F(x);
  bool bracket_failed = false;
  std::size_t value_index = 0;
  for (double h : scales) {
    const PhiMinimum min = minimize_phi(F, x, r, h, side, opts);
    if (!min.bracketed) bracket_failed = true;
    est.alpha_trace.push_back(min.alpha);
    const bool meaningful = min.phi > phi_floor(fx, min.alpha, x, h);
    est.residual_ratios.emplace_back(h, meaningful ? min.phi / h : 0.0);
    // below the roundoff floor the minimizer wanders inside pure noise, so the
    // reported slope comes from the finest scale that still carries signal
    if (meaningful) value_index = est.alpha_trace.size() - 1;
  }
  est.value = est.alpha_trace[value_index];
  const RatioTrend trend = classify_ratio_trend(est.residual_ratios, est.value, opts);
  est.trend_slope = trend.slope;
  est.verdict = bracket_failed ? Verdict::Diverges : trend.verdict;
  return est;
}

namespace {

struct DerivateConfig {
  Side side;
  Part part;
  double sigma;  // searches run on xi = sigma * alpha so that the valid set is up-closed
};

DerivateConfig derivate_config(DerivateKind which) {
  switch (which) {
    case DerivateKind::UpperRight:
      return {Side::Right, Part::Pos, +1.0};
    case DerivateKind::LowerRight:
      return {Side::Right, Part::Neg, -1.0};
    case DerivateKind::UpperLeft:
      return {Side::Left, Part::Neg, +1.0};
    case DerivateKind::LowerLeft:
      return {Side::Left, Part::Pos, -1.0};
  }
  throw std::logic_error("derivate_config: bad kind");
}

}  // namespace

DerivateEstimate one_sided_derivate(const FunctionModel& F, double x, double r,
                                    DerivateKind which, const HGrid& grid,
                                    const EstimatorOptions& opts) {
  const DerivateConfig cfg = derivate_config(which);
  const Interval dom = F.domain();
  const std::vector<double> scales = grid.scales_at(dom, x, cfg.side);
  if (scales.size() < 3) {
    throw std::invalid_argument("one_sided_derivate: fewer than 3 usable grid scales at x");
  }
  const double fx = F(x);
  const LrParams params{r, cfg.side, cfg.part};

  std::vector<std::pair<double, double>> last_probe;
  auto ratios_at = [&](double alpha) {
    std::vector<std::pair<double, double>> diag;
    diag.reserve(scales.size());
    for (double h : scales) {
      double phi = lr_mean_deviation(F, x, alpha, h, params, opts.quad).value;
      if (phi <= phi_floor(fx, alpha, x, h)) phi = 0.0;
      diag.emplace_back(h, phi / h);
    }
    return diag;
  };
  auto valid_xi = [&](double xi) {
    last_probe = ratios_at(cfg.sigma * xi);
    return classify_ratio_trend(last_probe, cfg.sigma * xi, opts).verdict == Verdict::Converges;
  };

  const double h_ref = scales[scales.size() / 2];
  const double quotient = cfg.side == Side::Right ? (F(x + h_ref) - fx) / h_ref
                                                  : (fx - F(x - h_ref)) / h_ref;
  const double xi0 = cfg.sigma * quotient;
  const double w0 = std::max(1.0, std::abs(xi0));

  DerivateEstimate est;
  double lo = xi0 - w0;
  double hi = xi0 + w0;
  double w = w0;
  while (!valid_xi(hi)) {
    lo = hi;
    hi = hi + w;
    w *= 2;
    if (hi > opts.alpha_limit) {
      est.value = cfg.sigma * kInf;
      est.verdict = Verdict::Diverges;
      est.diagnostics = last_probe;
      est.trend_slope = classify_ratio_trend(last_probe, opts.alpha_limit, opts).slope;
      return est;
    }
  }
  w = w0;
  while (valid_xi(lo)) {
    hi = lo;
    lo = lo - w;
    w *= 2;
    if (lo < -opts.alpha_limit) {
      est.value = cfg.sigma * (-kInf);
      est.verdict = Verdict::Diverges;
      est.diagnostics = last_probe;
      est.trend_slope = classify_ratio_trend(last_probe, opts.alpha_limit, opts).slope;
      return est;
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > opts.alpha_tol; ++iter) {
    const double mid = (lo + hi) / 2;
    if (valid_xi(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double xi_hat = (lo + hi) / 2;
  est.value = cfg.sigma * xi_hat;
  est.diagnostics = ratios_at(est.value);
  const RatioTrend trend = classify_ratio_trend(est.diagnostics, est.value, opts);
  est.trend_slope = trend.slope;
  est.verdict = Verdict::Converges;
  return est;
}

FourDerivates four_derivates(const FunctionModel& F, double x, double r, const HGrid& grid,
                             const EstimatorOptions& opts) {
  FourDerivates out;
  out.upper_right = one_sided_derivate(F, x, r, DerivateKind::UpperRight, grid, opts);
  out.lower_right = one_sided_derivate(F, x, r, DerivateKind::LowerRight, grid, opts);
  out.upper_left = one_sided_derivate(F, x, r, DerivateKind::UpperLeft, grid, opts);
  out.lower_left = one_sided_derivate(F, x, r, DerivateKind::LowerLeft, grid, opts);
  const double values[4] = {out.upper_right.value, out.lower_right.value, out.upper_left.value,
                            out.lower_left.value};
  double vmin = kInf, vmax = -kInf;
  bool finite = true;
  for (double v : values) {
    if (!std::isfinite(v)) finite = false;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  out.spread = vmax - vmin;
  out.all_equal = finite && out.spread <= opts.agreement_tol;
  return out;
}

DensitySet dense_reals(int points_per_window) {
  return dense_predicate([](double) { return true; }, points_per_window);
}

DensitySet dense_predicate(std::function<bool(double)> predicate, int points_per_window) {
  DensitySet set;
  set.contains = predicate;
  set.sample = [predicate, points_per_window](double lo, double hi) {
    std::vector<double> out;
    if (!(lo < hi)) return out;
    const double step = (hi - lo) / points_per_window;
    for (int i = 0; i < points_per_window; ++i) {
      const double y = lo + (i + 0.5) * step;
      if (predicate(y)) out.push_back(y);
    }
    return out;
  };
  return set;
}

DensitySet cantor_perfect_set(const CantorScheme& scheme, int depth, int max_points) {
  auto structure = std::make_shared<CantorStructure>(scheme, std::min(depth, 60));
  auto scheme_copy = std::make_shared<CantorScheme>(scheme);
  DensitySet set;
  set.contains = [scheme_copy, depth](double y) {
    if (y < 0.0 || y > 1.0) return false;
    return classify_point(*scheme_copy, y, depth).kind == PointClass::InPerfectSet;
  };
  set.sample = [structure, max_points](double lo, double hi) {
    std::vector<double> out;
    const double wlo = std::max(lo, 0.0);
    const double whi = std::min(hi, 1.0);
    if (!(wlo < whi)) return out;
    std::set<double> pts;
    // Left-first descent; level-interval endpoints all belong to the residual set.
    struct Node {
      double a;
      int level;
    };
    std::vector<Node> stack{{0.0, 0}};
    while (!stack.empty() && static_cast<int>(pts.size()) < max_points) {
      const Node node = stack.back();
      stack.pop_back();
      const double len = structure->level_len[node.level];
      const double b = node.a + len;
      if (b <= wlo || node.a >= whi) continue;
      if (node.a > wlo && node.a < whi) pts.insert(node.a);
      if (b > wlo && b < whi) pts.insert(b);
      if (node.level >= structure->depth_cap) continue;
      const double child = structure->level_len[node.level + 1];
      stack.push_back({node.a + len - child, node.level + 1});
      stack.push_back({node.a, node.level + 1});
    }
    out.assign(pts.begin(), pts.end());
    return out;
  };
  return set;
}

DerivativeEstimate approx_derivative(const FunctionModel& F, double x, const DensitySet& set,
                                     const HGrid& grid, const EstimatorOptions& opts) {
  (void)opts;
  const Interval dom = F.domain();
  // windows are clipped to the domain, so generate against the larger side
  const Side side = (dom.hi - x) >= (x - dom.lo) ? Side::Right : Side::Left;
  const std::vector<double> scales = grid.scales_at(dom, x, side);
  if (scales.size() < 3) {
    throw std::invalid_argument("approx_derivative: fewer than 3 usable grid scales at x");
  }

  DerivativeEstimate est;
  const double fx = F(x);
  bool any_empty = false;
  std::vector<std::pair<double, double>> medians;  // (h, median quotient)
  for (double h : scales) {
    const double wlo = std::max(dom.lo, x - h);
    const double whi = std::min(dom.hi, x + h);
    std::vector<double> ys = set.sample(wlo, whi);
    std::vector<double> quotients;
    quotients.reserve(ys.size());
    for (double y : ys) {
      if (y == x || !dom.contains(y)) continue;
      quotients.push_back((F(y) - fx) / (y - x));
    }
    if (quotients.empty()) {
      any_empty = true;
      continue;
    }
    std::sort(quotients.begin(), quotients.end());
    const std::size_t n = quotients.size();
    const double median =
        n % 2 == 1 ? quotients[n / 2] : (quotients[n / 2 - 1] + quotients[n / 2]) / 2;
    medians.emplace_back(h, median);
  }
  if (medians.empty()) {
    est.verdict = Verdict::Inconclusive;
    return est;
  }
  est.value = medians.back().second;
  for (const auto& [h, med] : medians) {
    est.alpha_trace.push_back(med);
    est.residual_ratios.emplace_back(h, std::abs(med - est.value));
  }

  const std::size_t n = medians.size();
  double tail = 0.0;
  for (std::size_t i = n >= 4 ? n - 4 : 0; i + 1 < n; ++i) {
    tail = std::max(tail, std::abs(medians[i].second - medians[i + 1].second));
  }
  const double tight = 1e-6 * (1.0 + std::abs(est.value));
  if (any_empty) {
    est.verdict = Verdict::Inconclusive;
  } else if (n >= 3 && tail <= tight) {
    est.verdict = Verdict::Converges;
  } else if (n >= 4 && std::abs(medians[n - 1].second - medians[n - 2].second) >
                           std::abs(medians[1].second - medians[0].second)) {
    est.verdict = Verdict::Diverges;
  } else {
    est.verdict = Verdict::Inconclusive;
  }
  return est;
}

}  // namespace gaugecalc
