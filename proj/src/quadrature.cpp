#include "gaugecalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gaugecalc {

double bracket_pow(double x, double r) {
  if (r == 1.0) return x;
  if (r == 2.0) return x * x;
  if (r == 3.0) return x * x * x;
  if (r == std::floor(r) && r > 0 && r <= 24.0) {
    double acc = 1.0;
    for (int k = 0; k < static_cast<int>(r); ++k) acc *= x;
    return acc;
  }
  return std::pow(x, r);
}

namespace {

double bracket_value(double g, Part part, double r) {
  switch (part) {
    case Part::Abs:
      return bracket_pow(std::abs(g), r);
    case Part::Pos:
      return g > 0 ? bracket_pow(g, r) : 0.0;
    case Part::Neg:
      return g < 0 ? bracket_pow(-g, r) : 0.0;
  }
  return 0.0;
}

Part swap_part(Part part) {
  if (part == Part::Pos) return Part::Neg;
  if (part == Part::Neg) return Part::Pos;
  return Part::Abs;
}

// Pieces are accumulated and summed in ascending value order so that the
// result is independent of segment traversal order (and mirrors exactly).
double canonical_sum(std::vector<double>& pieces) {
  std::sort(pieces.begin(), pieces.end());
  double acc = 0.0;
  for (double v : pieces) acc += v;
  return acc;
}

}  // namespace

double affine_bracket_integral(double a, double b, double r, double t0, double t1, Part part) {
  if (r < 1.0) throw std::invalid_argument("affine_bracket_integral: requires r >= 1");
  if (!(t0 <= t1)) throw std::invalid_argument("affine_bracket_integral: requires t0 <= t1");
  if (t0 == t1) return 0.0;
  if (part == Part::Neg) return affine_bracket_integral(-a, -b, r, t0, t1, Part::Pos);
  if (b == 0.0) {
    if (part == Part::Abs) return bracket_pow(std::abs(a), r) * (t1 - t0);
    return a > 0 ? bracket_pow(a, r) * (t1 - t0) : 0.0;
  }
  const double den = b * (r + 1.0);
  if (part == Part::Abs) {
    auto anti = [&](double t) {
      const double u = a + b * t;
      return bracket_pow(std::abs(u), r) * u / den;
    };
    return anti(t1) - anti(t0);
  }
  auto anti = [&](double t) {
    const double u = a + b * t;
    return u > 0 ? bracket_pow(u, r) * u / den : 0.0;
  };
  return anti(t1) - anti(t0);
}

double affine_power_integral(double a, double b, double r, double t0, double t1) {
  return affine_bracket_integral(a, b, r, t0, t1, Part::Abs);
}

namespace {

// ∫ over [lo,hi] of bracket_part(f_mid + f_slope (y - mid) - A - B y) dy in
// local coordinates about the segment midpoint; anchoring there keeps the
// kernel arguments small even when the piece slope is steep, and makes the
// value exactly invariant under window reflection.
double segment_kernel(Part part, double r, double f_mid, double f_slope, double A, double B,
                      double lo, double hi) {
  const double mid = (lo + hi) / 2;
  const double half = (hi - lo) / 2;
  const double c = A + B * mid;
  return affine_bracket_integral(f_mid - c, f_slope - B, r, -half, half, part);
}

// 15-point Gauss-Legendre on [-1, 1].
constexpr int kGlPoints = 15;
constexpr double kGlNode[kGlPoints] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGlWeight[kGlPoints] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

struct Workspace {
  const QuadratureOptions* opts = nullptr;
  long nodes = 0;
  double err = 0.0;
  double acc = 0.0;  // running sum of exactly-integrated pieces (all nonnegative)
  bool over_budget() const { return nodes > opts->max_nodes; }
};

template <typename G>
double gl15(const G& g, double lo, double hi) {
  const double mid = (lo + hi) / 2;
  const double half = (hi - lo) / 2;
  double f[kGlPoints];
  for (int i = 0; i < kGlPoints; ++i) f[i] = g(mid + half * kGlNode[i]);
  // Summing symmetric node pairs first makes the quadrature value exactly
  // invariant under reflection of the window.
  double acc = kGlWeight[kGlPoints / 2] * f[kGlPoints / 2];
  for (int i = 0; i < kGlPoints / 2; ++i) acc += kGlWeight[i] * (f[i] + f[kGlPoints - 1 - i]);
  return acc * half;
}

template <typename G>
double gl_recurse(const G& g, double lo, double hi, double whole, double tol, int depth,
                  Workspace& ws) {
  const double mid = (lo + hi) / 2;
  ws.nodes += 2;
  const double left = gl15(g, lo, mid);
  const double right = gl15(g, mid, hi);
  const double refined = left + right;
  const double diff = std::abs(whole - refined);
  if (diff <= tol || depth >= ws.opts->gl_max_depth || ws.over_budget()) {
    ws.err += diff;
    return refined;
  }
  return gl_recurse(g, lo, mid, left, tol / 2, depth + 1, ws) +
         gl_recurse(g, mid, hi, right, tol / 2, depth + 1, ws);
}

// ---------------------------------------------------------------------------
// Counterexample fast path.  The integrand decomposes over the construction's
// interval tree: gap pieces are affine (exact kernels), and integrals of powers
// of the function over a full level interval obey a two-child recursion that
// yields exact per-level masses.
// ---------------------------------------------------------------------------

struct CantorMasses {
  std::vector<double> abs_r;  // ∫ |f|^r over one level-m interval
  std::vector<double> pos_r;  // ∫ [f]_+^r
  std::vector<double> neg_r;  // ∫ [f]_-^r
  std::vector<double> abs_1;  // ∫ |f|
  std::vector<double> s1;     // ∫ f
  std::vector<double> m1;     // ∫ (y - a) f, with a the interval's left endpoint
  std::vector<double> abs_2;  // ∫ f^2
  std::vector<double> zero;   // measure of {f = 0} within one level-m interval
};

CantorMasses compute_cantor_masses(const CantorStructure& cs, double r) {
  const int cap = cs.depth_cap;
  CantorMasses t;
  t.abs_r.assign(cap + 1, 0.0);
  t.pos_r.assign(cap + 1, 0.0);
  t.neg_r.assign(cap + 1, 0.0);
  t.abs_1.assign(cap + 1, 0.0);
  t.s1.assign(cap + 1, 0.0);
  t.m1.assign(cap + 1, 0.0);
  t.abs_2.assign(cap + 1, 0.0);
  t.zero.assign(cap + 1, 0.0);
  t.zero[cap] = cs.level_len[cap];  // the model is 0 everywhere below the cap
  for (int m = cap - 1; m >= 0; --m) {
    const double v = cs.plateau_len[m];
    const double w = cs.ramp_len[m];
    const double val = cs.value[m];
    const double amag = std::abs(val);
    const double tent_abs_r = bracket_pow(amag, r) * (v + 2 * w / (r + 1));
    const double tent_abs_1 = amag * (v + w);
    const double tent_s1 = val * (v + w);
    const double tent_abs_2 = val * val * (v + 2 * w / 3);
    t.abs_r[m] = tent_abs_r + 2 * t.abs_r[m + 1];
    t.pos_r[m] = (val > 0 ? tent_abs_r : 0.0) + 2 * t.pos_r[m + 1];
    t.neg_r[m] = (val < 0 ? tent_abs_r : 0.0) + 2 * t.neg_r[m + 1];
    t.abs_1[m] = tent_abs_1 + 2 * t.abs_1[m + 1];
    t.s1[m] = tent_s1 + 2 * t.s1[m + 1];
    t.abs_2[m] = tent_abs_2 + 2 * t.abs_2[m + 1];
    const double child_offset = cs.level_len[m] - cs.level_len[m + 1];
    t.m1[m] = (cs.level_len[m] / 2) * tent_s1 + 2 * t.m1[m + 1] + child_offset * t.s1[m + 1];
    t.zero[m] = 2 * t.zero[m + 1];
  }
  return t;
}

struct CantorCtx {
  const CantorStructure* cs;
  CantorMasses masses;
  Part part;
  double r;
  double A;
  double B;
  Workspace* ws;
  double window_len = 1.0;

  double take(double piece) const {
    ws->acc += std::max(piece, 0.0);
    return piece;
  }

  // Relative goals are measured against the value accumulated so far, scaled
  // by the node's share of the window so that accepted errors stay summable.
  double local_tol(double tol_node, double share_len) const {
    const double rel = ws->opts->rel_tol;
    if (rel <= 0.0) return tol_node;
    return std::max(tol_node, rel * ws->acc * (share_len / window_len));
  }
};

double linear_integral(double A, double B, double lo, double hi) {
  const double mid = (lo + hi) / 2;
  return (A + B * mid) * (hi - lo);
}

double mass_for_part(const CantorCtx& ctx, int m) {
  switch (ctx.part) {
    case Part::Abs:
      return ctx.masses.abs_r[m];
    case Part::Pos:
      return ctx.masses.pos_r[m];
    case Part::Neg:
      return ctx.masses.neg_r[m];
  }
  return 0.0;
}

// ∫ over the full level-m interval [a, a+len] of (f - A - B y)^2.
double cantor_square_integral(const CantorCtx& ctx, int m, double a, double len) {
  const double cross = ctx.A * ctx.masses.s1[m] + ctx.B * (a * ctx.masses.s1[m] + ctx.masses.m1[m]);
  return ctx.masses.abs_2[m] - 2 * cross +
         affine_bracket_integral(ctx.A, ctx.B, 2.0, a, a + len, Part::Abs);
}

double cantor_node(const CantorCtx& ctx, int m, double a, double lo, double hi, double tol_node);

double cantor_gap_pieces(const CantorCtx& ctx, int m, double g_lo, double g_hi, double lo,
                         double hi) {
  const double w = ctx.cs->ramp_len[m];
  const double val = ctx.cs->value[m];
  const double p_lo = g_lo + w;
  const double p_hi = g_hi - w;
  double acc = 0.0;
  {  // left ramp
    const double s0 = std::max(lo, g_lo), s1 = std::min(hi, p_lo);
    if (s0 < s1) {
      const double f_mid = val * (((s0 + s1) / 2 - g_lo) / w);
      acc += ctx.take(segment_kernel(ctx.part, ctx.r, f_mid, val / w, ctx.A, ctx.B, s0, s1));
    }
  }
  {  // plateau
    const double s0 = std::max(lo, p_lo), s1 = std::min(hi, p_hi);
    if (s0 < s1) {
      acc += ctx.take(segment_kernel(ctx.part, ctx.r, val, 0.0, ctx.A, ctx.B, s0, s1));
    }
  }
  {  // right ramp
    const double s0 = std::max(lo, p_hi), s1 = std::min(hi, g_hi);
    if (s0 < s1) {
      const double f_mid = val * ((g_hi - (s0 + s1) / 2) / w);
      acc += ctx.take(segment_kernel(ctx.part, ctx.r, f_mid, -val / w, ctx.A, ctx.B, s0, s1));
    }
  }
  return acc;
}

double cantor_node(const CantorCtx& ctx, int m, double a, double lo, double hi, double tol_node) {
  const double len = ctx.cs->level_len[m];
  const double b = a + len;
  const double clip_lo = std::max(lo, a);
  const double clip_hi = std::min(hi, b);
  if (!(clip_lo < clip_hi)) return 0.0;
  ctx.ws->nodes += 1;

  if (m == ctx.cs->depth_cap) {
    // the model evaluates to 0 below the cap
    return ctx.take(segment_kernel(ctx.part, ctx.r, 0.0, 0.0, ctx.A, ctx.B, clip_lo, clip_hi));
  }

  const bool full = (clip_lo == a && clip_hi == b);
  if (full) {
    if (ctx.A == 0.0 && ctx.B == 0.0) return ctx.take(mass_for_part(ctx, m));
    if (ctx.r == 2.0 && ctx.part == Part::Abs) {
      return ctx.take(cantor_square_integral(ctx, m, a, len));
    }

    const double l0 = ctx.A + ctx.B * a;
    const double l1 = ctx.A + ctx.B * b;
    const double lmin = std::min(l0, l1);
    const double lmax = std::max(l0, l1);
    const double vbound = 1.0 / std::max(m, 1);
    if (lmin >= vbound) {
      // the affine part dominates from above: f - l <= 0 throughout
      if (ctx.part == Part::Pos) return 0.0;
      if (ctx.r == 1.0) {
        return ctx.take(linear_integral(ctx.A, ctx.B, a, b) - ctx.masses.s1[m]);
      }
      if (ctx.r == 2.0) return ctx.take(cantor_square_integral(ctx, m, a, len));
    } else if (lmax <= -vbound) {
      if (ctx.part == Part::Neg) return 0.0;
      if (ctx.r == 1.0) {
        return ctx.take(ctx.masses.s1[m] - linear_integral(ctx.A, ctx.B, a, b));
      }
      if (ctx.r == 2.0) return ctx.take(cantor_square_integral(ctx, m, a, len));
    }

    // Two approximation forms with computable error bounds.  Treating the
    // affine part as a perturbation of the tent mass is sharp when |l| is
    // small against the level values (this carries ac-sum terms tagged in the
    // residual set); treating the tents as a perturbation of the affine
    // kernel is sharp when |l| dominates.
    const double mscale = std::max(std::abs(l0), std::abs(l1));
    const double tent_measure = len - ctx.masses.zero[m];
    const double err_mass_form =
        ctx.r * bracket_pow(mscale + vbound, ctx.r - 1.0) * mscale * tent_measure +
        ctx.r * bracket_pow(mscale, ctx.r - 1.0) * std::abs(ctx.B) * len * ctx.masses.zero[m];
    const double err_kernel_form =
        ctx.r * bracket_pow(mscale + vbound, ctx.r - 1.0) * ctx.masses.abs_1[m];
    const double err_bound = std::min(err_mass_form, err_kernel_form);
    if (err_bound <= ctx.local_tol(tol_node, len) || ctx.ws->over_budget()) {
      ctx.ws->err += err_bound;
      const double kernel = segment_kernel(ctx.part, ctx.r, 0.0, 0.0, ctx.A, ctx.B, a, b);
      if (err_mass_form <= err_kernel_form) {
        return ctx.take(mass_for_part(ctx, m) + kernel * (ctx.masses.zero[m] / len));
      }
      return ctx.take(kernel);
    }
  } else if (ctx.ws->over_budget()) {
    const double vbound = 1.0 / std::max(m, 1);
    const double l0 = std::abs(ctx.A + ctx.B * clip_lo);
    const double l1 = std::abs(ctx.A + ctx.B * clip_hi);
    const double mscale = std::max(l0, l1) + vbound;
    ctx.ws->err += ctx.r * bracket_pow(mscale, ctx.r - 1.0) * ctx.masses.abs_1[m];
    return ctx.take(segment_kernel(ctx.part, ctx.r, 0.0, 0.0, ctx.A, ctx.B, clip_lo, clip_hi));
  }

  const double child = ctx.cs->level_len[m + 1];
  const double g_lo = a + child;
  const double g_hi = a + len - child;
  double acc = cantor_gap_pieces(ctx, m, g_lo, g_hi, clip_lo, clip_hi);
  const double clip_len = clip_hi - clip_lo;
  const double left_clip =
      std::max(0.0, std::min(clip_hi, a + child) - clip_lo);
  const double right_clip =
      std::max(0.0, clip_hi - std::max(clip_lo, a + len - child));
  acc += cantor_node(ctx, m + 1, a, clip_lo, clip_hi, tol_node * (left_clip / clip_len));
  acc += cantor_node(ctx, m + 1, a + len - child, clip_lo, clip_hi,
                     tol_node * (right_clip / clip_len));
  return acc;
}

double cantor_structural_integral(const CantorStructure& cs, Part part, double r, double A,
                                  double B, double lo, double hi, double tol, Workspace& ws) {
  // Wrapper transforms: reflection negates the argument, negation flips the
  // sign of the function (swapping the bracket).
  if (cs.mirrored) {
    const double new_lo = -hi;
    const double new_hi = -lo;
    lo = new_lo;
    hi = new_hi;
    B = -B;
  }
  if (cs.sign < 0) {
    part = swap_part(part);
    A = -A;
    B = -B;
  }
  CantorCtx ctx{&cs, compute_cantor_masses(cs, r), part, r, A, B, &ws};
  ctx.window_len = hi - lo;
  return cantor_node(ctx, 0, 0.0, lo, hi, tol);
}

}  // namespace

QuadratureResult adaptive_lr_integral(const FunctionModel& F, const Interval& window,
                                      const IntegrandSpec& spec, double r,
                                      const QuadratureOptions& opts) {
  if (r < 1.0) throw std::invalid_argument("adaptive_lr_integral: requires r >= 1");
  const Interval dom = F.domain();
  if (!(dom.lo <= window.lo && window.hi <= dom.hi)) {
    throw std::domain_error("adaptive_lr_integral: window escapes the domain");
  }
  if (!dom.contains(spec.x)) {
    throw std::domain_error("adaptive_lr_integral: base point outside the domain");
  }

  const double B = spec.alpha;
  const double A = F(spec.x) - spec.alpha * spec.x;

  std::vector<double> cuts;
  cuts.push_back(window.lo);
  const auto& bps = F.breakpoints();
  auto first = std::upper_bound(bps.begin(), bps.end(), window.lo);
  auto last = std::lower_bound(bps.begin(), bps.end(), window.hi);
  for (auto it = first; it != last; ++it) cuts.push_back(*it);
  cuts.push_back(window.hi);

  Workspace ws;
  ws.opts = &opts;
  const CantorStructure* cs = opts.structural_routing ? F.cantor_structure() : nullptr;
  const double total_len = window.length();

  std::vector<double> pieces;
  pieces.reserve(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double s0 = cuts[i];
    const double s1 = cuts[i + 1];
    if (!(s0 < s1)) continue;
    const double tol_seg = opts.tol * ((s1 - s0) / total_len);
    if (cs != nullptr) {
      pieces.push_back(
          cantor_structural_integral(*cs, spec.part, r, A, B, s0, s1, tol_seg, ws));
      continue;
    }
    if (opts.closed_form_routing) {
      if (auto piece = F.affine_on(s0, s1)) {
        const double f_mid = F((s0 + s1) / 2);
        pieces.push_back(segment_kernel(spec.part, r, f_mid, piece->slope, A, B, s0, s1));
        continue;
      }
    }
    auto g = [&](double y) {
      const double c = A + B * y;
      return bracket_value(F(y) - c, spec.part, r);
    };
    ws.nodes += 1;
    const double whole = gl15(g, s0, s1);
    pieces.push_back(gl_recurse(g, s0, s1, whole, tol_seg, 0, ws));
  }

  QuadratureResult res;
  // bracket integrands are nonnegative; exact-form rounding may leave -1ulp
  res.value = std::max(canonical_sum(pieces), 0.0);
  res.error_estimate = ws.err;
  res.subdivisions = ws.nodes;
  return res;
}

QuadratureResult lr_mean_deviation(const FunctionModel& F, double x, double alpha, double h,
                                   const LrParams& p, const QuadratureOptions& opts) {
  if (!(h > 0.0)) throw std::invalid_argument("lr_mean_deviation: requires h > 0");
  if (p.r < 1.0) throw std::invalid_argument("lr_mean_deviation: requires r >= 1");
  const Interval dom = F.domain();
  double lo = x, hi = x;
  switch (p.side) {
    case Side::Right:
      hi = x + h;
      break;
    case Side::Left:
      lo = x - h;
      break;
    case Side::TwoSided:
      lo = x - h;
      hi = x + h;
      break;
  }
  if (lo < dom.lo || hi > dom.hi) {
    throw std::domain_error("lr_mean_deviation: window escapes the domain");
  }

  const QuadratureResult inner =
      adaptive_lr_integral(F, Interval(lo, hi), IntegrandSpec{x, alpha, p.part}, p.r, opts);
  QuadratureResult res;
  res.subdivisions = inner.subdivisions;
  const double scaled = inner.value / h;
  res.value = scaled > 0 ? std::pow(scaled, 1.0 / p.r) : 0.0;
  if (inner.value > 0) {
    res.error_estimate = res.value * (inner.error_estimate / inner.value) / p.r;
  } else {
    res.error_estimate =
        inner.error_estimate > 0 ? std::pow(inner.error_estimate / h, 1.0 / p.r) : 0.0;
  }
  return res;
}

}  // namespace gaugecalc
