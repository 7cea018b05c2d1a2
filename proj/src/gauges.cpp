#include "gaugecalc/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gaugecalc/errors.hpp"

namespace gaugecalc {

Gauge Gauge::constant(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("Gauge: constant must be positive");
  Gauge g;
  g.kind_ = Kind::Constant;
  g.value_ = value;
  return g;
}

Gauge Gauge::piecewise_constant(std::vector<double> breakpoints, std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1) {
    throw std::invalid_argument("Gauge: need one more value than breakpoints");
  }
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw std::invalid_argument("Gauge: breakpoints must be sorted");
  }
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("Gauge: values must be positive");
  }
  Gauge g;
  g.kind_ = Kind::PiecewiseConstant;
  g.breakpoints_ = std::move(breakpoints);
  g.values_ = std::move(values);
  return g;
}

Gauge Gauge::pointwise(std::function<double(double)> fn, std::function<bool(double)> defined_on) {
  if (!fn) throw std::invalid_argument("Gauge: null callable");
  Gauge g;
  g.kind_ = Kind::Pointwise;
  g.fn_ = std::move(fn);
  g.defined_on_ = std::move(defined_on);
  return g;
}

bool Gauge::defined_at(double x) const {
  if (kind_ == Kind::Pointwise && defined_on_) return defined_on_(x);
  return true;
}

double Gauge::operator()(double x) const {
  if (!defined_at(x)) throw std::invalid_argument("Gauge: undefined at requested point");
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::PiecewiseConstant: {
      const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
      return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
    }
    case Kind::Pointwise: {
      const double v = fn_(x);
      if (!(v > 0.0)) throw std::invalid_argument("Gauge: callable returned non-positive value");
      return v;
    }
  }
  return value_;
}

std::string Gauge::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant:
      os << "constant(" << value_ << ")";
      break;
    case Kind::PiecewiseConstant:
      os << "piecewise-constant(" << values_.size() << " pieces)";
      break;
    case Kind::Pointwise:
      os << "pointwise";
      break;
  }
  return os.str();
}

TaggedInterval::TaggedInterval(Interval iv, double t) : interval(iv), tag(t) {
  if (!interval.contains(tag)) {
    throw std::invalid_argument("TaggedInterval: tag must lie in the interval");
  }
}

TaggedPartition::TaggedPartition(std::vector<TaggedInterval> items) : items_(std::move(items)) {}

double TaggedPartition::total_length() const {
  double acc = 0.0;
  for (const auto& it : items_) acc += it.interval.length();
  return acc;
}

bool TaggedPartition::nonoverlapping() const {
  std::vector<std::pair<double, double>> spans;
  spans.reserve(items_.size());
  for (const auto& it : items_) spans.emplace_back(it.interval.lo, it.interval.hi);
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
    if (spans[i].second > spans[i + 1].first) return false;
  }
  return true;
}

bool TaggedPartition::tiles(const Interval& domain) const {
  if (items_.empty()) return false;
  std::vector<std::pair<double, double>> spans;
  spans.reserve(items_.size());
  for (const auto& it : items_) spans.emplace_back(it.interval.lo, it.interval.hi);
  std::sort(spans.begin(), spans.end());
  if (spans.front().first != domain.lo || spans.back().second != domain.hi) return false;
  for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
    if (spans[i].second != spans[i + 1].first) return false;
  }
  return true;
}

bool is_fine(const TaggedPartition& p, const Gauge& g) {
  for (const auto& it : p.items()) {
    if (!g.defined_at(it.tag)) {
      throw std::invalid_argument("is_fine: gauge undefined at a tag");
    }
    const double delta = g(it.tag);
    if (!(it.interval.lo > it.tag - delta && it.interval.hi < it.tag + delta)) return false;
  }
  return true;
}

TaggedPartition cousin_partition(const Interval& domain, const Gauge& g, int max_depth) {
  if (max_depth < 1) throw std::invalid_argument("cousin_partition: max_depth must be >= 1");
  struct Node {
    double lo, hi;
    int depth;
  };
  std::vector<TaggedInterval> out;
  std::vector<Node> stack{{domain.lo, domain.hi, 0}};
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    const double mid = (node.lo + node.hi) / 2;
    if (!g.defined_at(mid)) {
      throw std::invalid_argument("cousin_partition: gauge undefined inside the domain");
    }
    // Length below the gauge value makes the midpoint-tagged piece strictly fine.
    if (node.hi - node.lo < g(mid)) {
      out.emplace_back(Interval(node.lo, node.hi), mid);
      continue;
    }
    if (node.depth + 1 > max_depth || !(node.lo < mid && mid < node.hi)) {
      std::ostringstream os;
      os << "cousin_partition: gauge too small near [" << node.lo << ", " << node.hi
         << "] (depth " << node.depth << ")";
      throw resource_error(os.str());
    }
    stack.push_back({mid, node.hi, node.depth + 1});
    stack.push_back({node.lo, mid, node.depth + 1});
  }
  return TaggedPartition(std::move(out));
}

namespace {

double canonical_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc;
}

double deviation_term(const FunctionModel& F, const Interval& window, double tag, double alpha,
                      double r, const QuadratureOptions& opts) {
  const QuadratureResult res =
      adaptive_lr_integral(F, window, IntegrandSpec{tag, alpha, Part::Abs}, r, opts);
  const double scaled = res.value / window.length();
  return scaled > 0 ? std::pow(scaled, 1.0 / r) : 0.0;
}

}  // namespace

double riemann_lr_sum(const TaggedPartition& p, const FunctionModel& F, const FunctionModel& f,
                      double r, const QuadratureOptions& opts) {
  std::vector<double> terms;
  terms.reserve(p.size());
  for (const auto& it : p.items()) {
    terms.push_back(deviation_term(F, it.interval, it.tag, f(it.tag), r, opts));
  }
  return canonical_sum(terms);
}

double ac_sum(const TaggedPartition& p, const FunctionModel& F, double r,
              const QuadratureOptions& opts) {
  std::vector<double> terms;
  terms.reserve(p.size());
  for (const auto& it : p.items()) {
    terms.push_back(deviation_term(F, it.interval, it.tag, 0.0, r, opts));
  }
  return canonical_sum(terms);
}

namespace {

struct Candidate {
  double lo, hi, tag;
  double term = 0.0;
  double density = 0.0;
};

// Greedy sweep: tags ascending, same-size interval left and right of each tag,
// skipping pieces that would overlap previously taken ones.
TaggedPartition build_uniform(const std::vector<double>& tags, const Gauge& g, double scale,
                              double eta, const Interval& dom) {
  std::vector<TaggedInterval> items;
  double last_hi = -std::numeric_limits<double>::infinity();
  double budget = eta * 0.995;
  for (double x : tags) {
    if (!(scale < g(x))) continue;
    if (budget < scale) break;
    if (x - scale >= last_hi && x - scale >= dom.lo && x > x - scale) {
      items.emplace_back(Interval(x - scale, x), x);
      last_hi = x;
      budget -= scale;
      if (budget < scale) break;
    }
    if (x >= last_hi && x + scale <= dom.hi && x + scale > x) {
      items.emplace_back(Interval(x, x + scale), x);
      last_hi = x + scale;
      budget -= scale;
    }
  }
  return TaggedPartition(std::move(items));
}

TaggedPartition build_greedy(std::vector<Candidate> pool, double eta) {
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.density != b.density) return a.density > b.density;
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  });
  std::map<double, double> taken;  // lo -> hi
  std::vector<TaggedInterval> items;
  double budget = eta * 0.995;
  for (const Candidate& c : pool) {
    const double len = c.hi - c.lo;
    if (len > budget) continue;
    auto next = taken.lower_bound(c.lo);
    if (next != taken.end() && next->first < c.hi) continue;
    if (next != taken.begin() && std::prev(next)->second > c.lo) continue;
    taken.emplace(c.lo, c.hi);
    items.emplace_back(Interval(c.lo, c.hi), c.tag);
    budget -= len;
  }
  return TaggedPartition(std::move(items));
}

}  // namespace

TaggedPartition adversarial_small_partition(const std::vector<double>& tags, const Gauge& g,
                                            double eta, const FunctionModel& F, double r,
                                            long budget, std::uint64_t seed) {
  if (!(eta > 0.0)) throw std::invalid_argument("adversarial_small_partition: eta must be > 0");
  const Interval dom = F.domain();
  std::vector<double> usable;
  for (double x : tags) {
    if (dom.contains(x) && g.defined_at(x)) usable.push_back(x);
  }
  std::sort(usable.begin(), usable.end());
  usable.erase(std::unique(usable.begin(), usable.end()), usable.end());
  if (usable.empty()) return TaggedPartition();

  const QuadratureOptions quad;
  long evals = 0;
  auto term_of = [&](double lo, double hi, double tag) {
    ++evals;
    return deviation_term(F, Interval(lo, hi), tag, 0.0, r, quad);
  };

  double delta_max = 0.0;
  for (double x : usable) delta_max = std::max(delta_max, g(x));
  const double s_top = std::min(eta, delta_max) * 0.98;

  constexpr int kScales = 30;
  std::vector<double> ladder;
  for (int j = 0; j < kScales; ++j) ladder.push_back(s_top * std::ldexp(1.0, -j));

  // Deterministic tag subsample used to estimate per-scale mean terms.
  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL);
  const std::size_t sample_size =
      std::min<std::size_t>(usable.size(), std::max<long>(8, budget / (4 * kScales)));
  std::vector<double> sample;
  if (sample_size >= usable.size()) {
    sample = usable;
  } else {
    const std::size_t stride = usable.size() / sample_size;
    for (std::size_t i = 0; i < usable.size(); i += stride) sample.push_back(usable[i]);
  }
  (void)rng;

  std::vector<Candidate> pool;

  // Counterexample-aware shapes: intervals reaching from a tag to the gap
  // midpoints of its enclosing level intervals, where the plateau mass sits.
  if (const CantorStructure* cs = F.cantor_structure()) {
    for (double x : sample) {
      if (evals > budget) break;
      const double delta = g(x);
      double a = 0.0;
      for (int m = 0; m < cs->depth_cap; ++m) {
        const double len = cs->level_len[m];
        const double mid = a + len / 2;
        const double s = std::abs(mid - x);
        if (s > 0.0 && s < delta && s < eta) {
          bool pushed = false;
          if (mid > x && mid <= dom.hi) {
            pool.push_back({x, mid, x, 0.0, 0.0});
            pushed = true;
          } else if (mid < x && mid >= dom.lo) {
            pool.push_back({mid, x, x, 0.0, 0.0});
            pushed = true;
          }
          if (pushed) {
            pool.back().term = term_of(pool.back().lo, pool.back().hi, x);
            pool.back().density = pool.back().term / s;
          }
        }
        const double g_lo = a + cs->level_len[m + 1];
        const double g_hi = a + len - cs->level_len[m + 1];
        if (x <= g_lo) {
          // left child keeps the anchor
        } else if (x >= g_hi) {
          a = a + len - cs->level_len[m + 1];
        } else {
          break;  // the tag sits inside this gap
        }
        if (cs->level_len[m + 1] < 1e-12) break;
      }
    }
  }

  // Strategy 1: one scale for all tags, chosen by projected total.
  double best_score = -1.0;
  double best_scale = ladder.front();
  for (double s : ladder) {
    if (evals > budget) break;
    double mean = 0.0;
    int used = 0;
    for (double x : sample) {
      if (!(s < g(x))) continue;
      double right_term = 0.0;
      if (x + s <= dom.hi) {
        right_term = term_of(x, x + s, x);
        pool.push_back({x, x + s, x, right_term, right_term / s});
      }
      double left_term = 0.0;
      if (x - s >= dom.lo) {
        left_term = term_of(x - s, x, x);
        pool.push_back({x - s, x, x, left_term, left_term / s});
      }
      mean += right_term + left_term;
      used += 2;
    }
    if (used == 0) continue;
    mean /= used;
    const double slots =
        std::min<double>(2.0 * static_cast<double>(usable.size()), eta * 0.995 / s);
    const double score = slots * mean;
    if (score > best_score) {
      best_score = score;
      best_scale = s;
    }
  }

  TaggedPartition best = build_uniform(usable, g, best_scale, eta, dom);
  double best_sum = best.empty() ? 0.0 : ac_sum(best, F, r, quad);

  // Strategy 2: greedy by per-length contribution over the evaluated pool.
  TaggedPartition greedy = build_greedy(std::move(pool), eta);
  const double greedy_sum = greedy.empty() ? 0.0 : ac_sum(greedy, F, r, quad);
  if (greedy_sum > best_sum) {
    best = std::move(greedy);
    best_sum = greedy_sum;
  }

  // A second uniform pass at neighbouring scales sometimes beats the projection.
  for (double factor : {0.5, 2.0}) {
    const double s = best_scale * factor;
    if (!(s > 0.0) || s > s_top) continue;
    TaggedPartition alt = build_uniform(usable, g, s, eta, dom);
    if (alt.empty()) continue;
    const double alt_sum = ac_sum(alt, F, r, quad);
    if (alt_sum > best_sum) {
      best = std::move(alt);
      best_sum = alt_sum;
    }
  }
  return best;
}

}  // namespace gaugecalc
