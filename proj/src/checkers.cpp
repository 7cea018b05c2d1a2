#include "gaugecalc/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gaugecalc/derivates.hpp"
#include "gaugecalc/errors.hpp"
#include "gaugecalc/serde.hpp"

namespace gaugecalc {

namespace {

TaggedPartition randomized_refinement(const TaggedPartition& base, const Gauge& g,
                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TaggedInterval> items;
  items.reserve(base.size() * 2);
  auto fine_tag = [&](double lo, double hi) -> std::optional<double> {
    for (int attempt = 0; attempt < 8; ++attempt) {
      const double t = lo + unit(rng) * (hi - lo);
      if (!g.defined_at(t)) continue;
      const double delta = g(t);
      if (lo > t - delta && hi < t + delta) return t;
    }
    const double mid = (lo + hi) / 2;
    if (g.defined_at(mid)) {
      const double delta = g(mid);
      if (lo > mid - delta && hi < mid + delta) return mid;
    }
    return std::nullopt;
  };
  for (const auto& it : base.items()) {
    const double lo = it.interval.lo;
    const double hi = it.interval.hi;
    if (unit(rng) < 0.5) {
      const double cut = lo + (0.35 + 0.3 * unit(rng)) * (hi - lo);
      const auto t1 = fine_tag(lo, cut);
      const auto t2 = fine_tag(cut, hi);
      if (t1 && t2) {
        items.emplace_back(Interval(lo, cut), *t1);
        items.emplace_back(Interval(cut, hi), *t2);
        continue;
      }
    }
    const auto t = fine_tag(lo, hi);
    items.emplace_back(it.interval, t ? *t : it.tag);
  }
  return TaggedPartition(std::move(items));
}

}  // namespace

CheckReport hkr_check(const FunctionModel& F, const FunctionModel& f, double epsilon,
                      const std::vector<Gauge>& gauge_ladder, int trials, double r,
                      std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("hkr_check: epsilon must be > 0");
  if (gauge_ladder.empty()) throw std::invalid_argument("hkr_check: empty gauge ladder");
  const Interval dom = F.domain();
  const Interval fdom = f.domain();
  if (!(fdom.lo <= dom.lo && dom.hi <= fdom.hi)) {
    throw std::domain_error("hkr_check: f must be defined on the domain of F");
  }

  CheckReport report;
  report.parameters["epsilon"] = format_double(epsilon);
  report.parameters["r"] = format_double(r);
  report.parameters["trials"] = std::to_string(trials);
  report.parameters["note"] =
      "certificate: some gauge kept all sampled sums below epsilon; "
      "violation: the finest gauge was beaten (quantifier over all gauges is not decided)";

  for (std::size_t gi = 0; gi < gauge_ladder.size(); ++gi) {
    const Gauge& gauge = gauge_ladder[gi];
    std::mt19937_64 rng(seed * 1315423911ULL + gi);
    const TaggedPartition base = cousin_partition(dom, gauge);
    double max_sum = -1.0;
    TaggedPartition worst;
    for (int t = 0; t <= trials; ++t) {
      TaggedPartition p = t == 0 ? base : randomized_refinement(base, gauge, rng);
      if (!is_fine(p, gauge)) continue;
      const double s = riemann_lr_sum(p, F, f, r);
      if (s > max_sum) {
        max_sum = s;
        worst = std::move(p);
      }
    }
    if (max_sum < epsilon) {
      report.verdict = CheckVerdict::Certificate;
      report.parameters["gauge"] = gauge.describe();
      report.numeric_summary["maxSampledSum"] = max_sum;
      report.numeric_summary["partitionItems"] = static_cast<double>(base.size());
      return report;
    }
    if (gi + 1 == gauge_ladder.size()) {
      report.verdict = CheckVerdict::WitnessViolation;
      report.parameters["gauge"] = gauge.describe();
      report.numeric_summary["witnessSum"] = max_sum;
      QuadratureOptions tight;
      tight.tol = 1e-12;
      report.numeric_summary["witnessReEval"] = riemann_lr_sum(worst, F, f, r, tight);
      report.witness_partition = std::move(worst);
      return report;
    }
  }
  report.verdict = CheckVerdict::Inconclusive;
  return report;
}

CheckReport acr_check(const FunctionModel& F, const std::vector<double>& E, double r,
                      double epsilon, std::vector<double> eta_ladder,
                      const std::vector<Gauge>& gauge_ladder, long budget, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("acr_check: epsilon must be > 0");
  if (gauge_ladder.empty()) throw std::invalid_argument("acr_check: empty gauge ladder");
  eta_ladder.push_back(epsilon);
  std::sort(eta_ladder.begin(), eta_ladder.end(), std::greater<double>());
  eta_ladder.erase(std::unique(eta_ladder.begin(), eta_ladder.end()), eta_ladder.end());

  CheckReport report;
  report.parameters["epsilon"] = format_double(epsilon);
  report.parameters["r"] = format_double(r);
  report.parameters["tags"] = std::to_string(E.size());
  report.parameters["note"] =
      "constant/piecewise-constant gauge ladder only; certificates are evidence, "
      "violations re-evaluate above epsilon";

  double worst_sum = -1.0;
  TaggedPartition worst;
  std::string worst_desc;
  // Coarse gauges admit the most partitions, so a pair surviving there is the
  // strongest certificate; scan them first.
  for (std::size_t gi = 0; gi < gauge_ladder.size(); ++gi) {
    const Gauge& gauge = gauge_ladder[gi];
    for (double eta : eta_ladder) {
      if (!(eta > 0.0)) throw std::invalid_argument("acr_check: eta must be > 0");
      const TaggedPartition attack =
          adversarial_small_partition(E, gauge, eta, F, r, budget, seed + gi);
      const double s = attack.empty() ? 0.0 : ac_sum(attack, F, r);
      if (s < epsilon) {
        report.verdict = CheckVerdict::Certificate;
        report.parameters["eta"] = format_double(eta);
        report.parameters["gauge"] = gauge.describe();
        report.numeric_summary["maxAttackSum"] = s;
        return report;
      }
      if (s > worst_sum) {
        worst_sum = s;
        worst = attack;
        worst_desc = "eta=" + format_double(eta) + " gauge=" + gauge.describe();
      }
    }
  }
  report.verdict = CheckVerdict::WitnessViolation;
  report.parameters["beatenPair"] = worst_desc;
  report.numeric_summary["witnessSum"] = worst_sum;
  report.numeric_summary["witnessLength"] = worst.total_length();
  QuadratureOptions tight;
  tight.tol = 1e-12;
  report.numeric_summary["witnessReEval"] = ac_sum(worst, F, r, tight);
  report.witness_partition = std::move(worst);
  return report;
}

CheckReport ac_check(const FunctionModel& F, const std::vector<double>& E, double epsilon,
                     std::vector<double> eta_ladder, long budget) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("ac_check: epsilon must be > 0");
  eta_ladder.push_back(epsilon);
  std::vector<double> pts = E;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const Interval dom = F.domain();
  std::erase_if(pts, [&](double x) { return !dom.contains(x); });

  CheckReport report;
  report.parameters["epsilon"] = format_double(epsilon);
  report.parameters["points"] = std::to_string(pts.size());
  if (pts.size() < 2) {
    report.verdict = CheckVerdict::Certificate;
    report.numeric_summary["maxAttackSum"] = 0.0;
    return report;
  }

  struct Pair {
    std::size_t i, j;
    double gain;     // |F(d) - F(c)|
    double density;  // gain / length
  };
  std::vector<Pair> candidates;
  const int span_cap = 4;
  long evals = 0;
  for (std::size_t i = 0; i < pts.size() && evals < budget; ++i) {
    for (int s = 1; s <= span_cap && i + s < pts.size() && evals < budget; ++s) {
      const std::size_t j = i + s;
      const double len = pts[j] - pts[i];
      if (!(len > 0.0)) continue;
      const double gain = std::abs(F(pts[j]) - F(pts[i]));
      ++evals;
      candidates.push_back({i, j, gain, gain / len});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Pair& a, const Pair& b) {
    if (a.density != b.density) return a.density > b.density;
    return a.i < b.i;
  });

  // Refuting membership needs a violating collection at every eta; one
  // surviving eta is certificate evidence.
  std::sort(eta_ladder.begin(), eta_ladder.end(), std::greater<double>());
  eta_ladder.erase(std::unique(eta_ladder.begin(), eta_ladder.end()), eta_ladder.end());
  double worst_sum = 0.0;
  std::vector<Interval> worst_chosen;
  double worst_eta = 0.0;
  for (double eta : eta_ladder) {
    if (!(eta > 0.0)) throw std::invalid_argument("ac_check: eta must be > 0");
    double length_budget = eta * 0.995;
    double sum = 0.0;
    std::map<double, double> taken;
    std::vector<Interval> chosen;
    for (const Pair& c : candidates) {
      const double lo = pts[c.i];
      const double hi = pts[c.j];
      const double len = hi - lo;
      if (len > length_budget) continue;
      auto next = taken.lower_bound(lo);
      if (next != taken.end() && next->first < hi) continue;
      if (next != taken.begin() && std::prev(next)->second > lo) continue;
      taken.emplace(lo, hi);
      chosen.emplace_back(lo, hi);
      length_budget -= len;
      sum += c.gain;
    }
    if (sum < epsilon) {
      report.verdict = CheckVerdict::Certificate;
      report.parameters["eta"] = format_double(eta);
      report.numeric_summary["maxAttackSum"] = sum;
      return report;
    }
    worst_sum = sum;
    worst_chosen = std::move(chosen);
    worst_eta = eta;
  }
  report.verdict = CheckVerdict::WitnessViolation;
  report.parameters["eta"] = format_double(worst_eta);
  report.numeric_summary["witnessSum"] = worst_sum;
  double re_eval = 0.0, total = 0.0;
  for (const Interval& iv : worst_chosen) {
    re_eval += std::abs(F(iv.hi) - F(iv.lo));
    total += iv.length();
  }
  report.numeric_summary["witnessReEval"] = re_eval;
  report.numeric_summary["witnessLength"] = total;
  report.witness_intervals = std::move(worst_chosen);
  return report;
}

double counterexample_bound_intermediate(int n, double r) {
  if (n < 1) throw std::invalid_argument("counterexample_bound: requires n >= 1");
  if (r < 1.0) throw std::invalid_argument("counterexample_bound: requires r >= 1");
  const double rn = (n + 4.0) / (std::ldexp(1.0, n + 1) * (n + 2.0));
  const double un = 1.0 / (std::ldexp(1.0, n) * (n + 2.0) * (n + 3.0));
  return std::pow(2.0, 1.0 - 1.0 / r) / (n * rn) * std::pow(un / rn, 1.0 / r);
}

double counterexample_bound(int n, double r) {
  if (n < 1) throw std::invalid_argument("counterexample_bound: requires n >= 1");
  if (r < 1.0) throw std::invalid_argument("counterexample_bound: requires r >= 1");
  const double closed = std::ldexp(1.0, n + 2) * (n + 2.0) /
                        (n * std::pow(n + 4.0, 1.0 + 1.0 / r) * std::pow(n + 3.0, 1.0 / r));
  const double intermediate = counterexample_bound_intermediate(n, r);
  if (std::abs(closed - intermediate) > 1e-12 * std::abs(closed)) {
    throw std::logic_error("counterexample_bound: closed and intermediate forms disagree");
  }
  return closed;
}

CheckReport counterexample_verify(const CantorScheme& scheme, int n_lo, int n_hi,
                                  const std::vector<double>& r_list, double tol, int depth_cap) {
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("counterexample_verify: bad n range");
  if (n_hi > depth_cap - 4) {
    throw resource_error("counterexample_verify: n range too deep for the depth cap");
  }
  const FunctionModel F = FunctionModel::counterexample(scheme, depth_cap);

  CheckReport report;
  report.parameters["tol"] = format_double(tol);
  report.parameters["alpha"] = "0";
  report.parameters["x"] = "0";

  bool all_pass = true;
  bool any_inconclusive = false;
  for (double r : r_list) {
    double q_first = 0.0, q_last = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
      VerifyRow row;
      row.n = n;
      row.r = r;
      row.h = rat_to_double(scheme.level_length(n)) / 2;
      const QuadratureResult dev =
          lr_mean_deviation(F, 0.0, 0.0, row.h, LrParams{r, Side::Right, Part::Abs});
      row.q = dev.value / row.h;
      row.bound = counterexample_bound(n, r);
      row.inconclusive = dev.error_estimate > std::max(1e-300, dev.value) * 1e-3;
      row.pass = !row.inconclusive && row.q >= row.bound * (1.0 - tol);
      if (row.inconclusive) {
        any_inconclusive = true;
      } else if (!row.pass) {
        all_pass = false;
      }
      if (n == n_lo) q_first = row.q;
      if (n == n_hi) q_last = row.q;
      report.rows.push_back(row);
    }
    std::ostringstream key;
    key << "growth_r=" << r;
    report.numeric_summary[key.str()] = q_first > 0 ? q_last / q_first : 0.0;
  }
  report.verdict = all_pass && !any_inconclusive
                       ? CheckVerdict::Certificate
                       : (all_pass ? CheckVerdict::Inconclusive : CheckVerdict::WitnessViolation);
  return report;
}

}  // namespace gaugecalc
