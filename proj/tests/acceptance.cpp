// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gaugecalc/checkers.hpp"
#include "gaugecalc/derivates.hpp"
#include "gaugecalc/serde.hpp"

using namespace gaugecalc;

namespace {

int g_failures = 0;

void run_criterion(int id, const std::string& label, double time_limit_s,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    ok = false;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0 && elapsed > time_limit_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  std::printf("%s  C%-2d %-38s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", id, label.c_str(), elapsed,
              detail.empty() ? "" : "  -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

FunctionModel random_polynomial(std::mt19937_64& rng, int max_degree,
                                std::vector<double>* coeffs_out) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> coeffs;
  for (int k = 0; k <= max_degree; ++k) coeffs.push_back(coef(rng));
  if (coeffs_out) *coeffs_out = coeffs;
  return FunctionModel::polynomial(Interval(0.0, 1.0), coeffs);
}

double poly_derivative(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    acc = acc * x + coeffs[k] * static_cast<double>(k);
  }
  return acc;
}

FunctionModel random_pwl(std::mt19937_64& rng, int segments, std::vector<double>* xs_out) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs{0.0};
  for (int i = 1; i < segments; ++i) xs.push_back(unit(rng));
  xs.push_back(1.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> ys;
  for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(2.0 * unit(rng) - 1.0);
  if (xs_out) *xs_out = xs;
  return FunctionModel::piecewise_linear(xs, ys);
}

double segmentwise_reference(const FunctionModel& F, double x, double alpha, double lo, double hi,
                             double r, Part part) {
  std::vector<double> cuts{lo, hi};
  for (double b : F.breakpoints()) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  auto g = [&](double y) { return F(y) - F(x) - alpha * (y - x); };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double p = cuts[i], q = cuts[i + 1];
    if (!(p < q)) continue;
    const double slope = (g(q) - g(p)) / (q - p);
    acc += affine_bracket_integral(g((p + q) / 2), slope, r, -(q - p) / 2, (q - p) / 2, part);
  }
  return acc;
}

bool criterion_cantor_geometry(std::string& detail) {
  const CantorScheme s = CantorScheme::fat();
  if (s.level_length(1) != rat(5, 12) || s.gap_length(0) != rat(1, 6)) {
    detail = "published level-1/gap-0 values do not match";
    return false;
  }
  for (int n = 0; n <= 30; ++n) {
    if (s.level_length(n + 1) != (s.level_length(n) - s.gap_length(n)) / 2) {
      detail = "child recursion failed at n=" + std::to_string(n);
      return false;
    }
    if (level_measure(s, n) != Rational(1, 2) + Rational(1, n + 2)) {
      detail = "measure identity failed at n=" + std::to_string(n);
      return false;
    }
  }
  return true;
}

bool criterion_bound_identity(std::string& detail) {
  for (int n = 1; n <= 40; ++n) {
    for (double r : {1.0, 1.5, 2.0, 3.0}) {
      const double closed = counterexample_bound(n, r);  // also checks internally
      const double intermediate = counterexample_bound_intermediate(n, r);
      if (std::abs(closed - intermediate) > 1e-12 * std::abs(closed)) {
        detail = "forms disagree at n=" + std::to_string(n) + " r=" + format_double(r);
        return false;
      }
    }
  }
  return true;
}

bool criterion_divergence(std::string& detail) {
  const CheckReport report = counterexample_verify(CantorScheme::fat(), 1, 12, {1.0, 2.0}, 1e-6);
  if (report.verdict != CheckVerdict::Certificate) {
    detail = "verify verdict is not a certificate";
    return false;
  }
  for (const VerifyRow& row : report.rows) {
    if (!row.pass) {
      detail = "row n=" + std::to_string(row.n) + " r=" + format_double(row.r) + " failed";
      return false;
    }
  }
  for (double r : {1.0, 2.0}) {
    double q1 = 0.0, q12 = 0.0;
    for (const VerifyRow& row : report.rows) {
      if (row.r == r && row.n == 1) q1 = row.q;
      if (row.r == r && row.n == 12) q12 = row.q;
    }
    if (!(q12 > 10.0 * q1)) {
      detail = "growth check failed at r=" + format_double(r);
      return false;
    }
  }
  return true;
}

bool criterion_smooth_consistency(std::string& detail) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // a denser ladder sharpens the derivate boundary search below the 1e-5 gate
  const HGrid grid = HGrid::geometric(0.0, 0.5, 28);
  EstimatorOptions opts;
  double worst_disagreement = 0.0;
  for (int p = 0; p < 5; ++p) {
    std::vector<double> coeffs;
    const FunctionModel F = random_polynomial(rng, 5, &coeffs);
    for (int i = 0; i < 20; ++i) {
      const double x = 0.05 + 0.9 * unit(rng);
      const double truth = poly_derivative(coeffs, x);
      for (double r : {1.0, 2.0, 3.0}) {
        const DerivativeEstimate est = lr_derivative(F, x, r, grid, opts);
        if (est.verdict != Verdict::Converges || std::abs(est.value - truth) > 1e-6) {
          detail = "derivative mismatch at poly " + std::to_string(p) + " x=" +
                   format_double(x) + " r=" + format_double(r) + " err=" +
                   format_double(std::abs(est.value - truth));
          return false;
        }
      }
      const FourDerivates four = four_derivates(F, x, 2.0, grid, opts);
      worst_disagreement = std::max(worst_disagreement, four.spread);
      if (!four.all_equal) {
        detail = "four derivates disagree at poly " + std::to_string(p) +
                 " x=" + format_double(x) + " spread=" + format_double(four.spread);
        return false;
      }
    }
  }
  detail = "max four-derivate spread " + format_double(worst_disagreement);
  return true;
}

bool criterion_approx_agreement(std::string& detail) {
  std::mt19937_64 rng(512);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const HGrid grid;
  const DensitySet line = dense_reals();
  for (int p = 0; p < 5; ++p) {
    std::vector<double> coeffs;
    const FunctionModel F = random_polynomial(rng, 5, &coeffs);
    for (int i = 0; i < 8; ++i) {
      const double x = 0.05 + 0.9 * unit(rng);
      const DerivativeEstimate ap = approx_derivative(F, x, line, grid);
      const DerivativeEstimate lr = lr_derivative(F, x, 2.0, grid);
      if (std::abs(ap.value - lr.value) > 1e-5) {
        detail = "approx/deviation mismatch " + format_double(std::abs(ap.value - lr.value));
        return false;
      }
    }
  }
  return true;
}

bool criterion_gordon(std::string& detail) {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const HGrid grid;
  EstimatorOptions opts;
  for (int f = 0; f < 20; ++f) {
    std::vector<double> xs;
    const FunctionModel F = random_pwl(rng, 3 + f % 5, &xs);
    int accepted = 0;
    while (accepted < 4) {
      const double x = 0.05 + 0.9 * unit(rng);
      bool clear = true;
      for (double b : xs) {
        if (std::abs(x - b) < 1e-3) clear = false;
      }
      if (!clear) continue;
      ++accepted;
      const DerivateEstimate ur = one_sided_derivate(F, x, 1.0, DerivateKind::UpperRight, grid, opts);
      const DerivateEstimate ul = one_sided_derivate(F, x, 1.0, DerivateKind::UpperLeft, grid, opts);
      if (!std::isfinite(ur.value) || !std::isfinite(ul.value)) continue;
      const DerivativeEstimate est = lr_derivative(F, x, 1.0, grid, opts);
      if (est.verdict != Verdict::Converges) {
        detail = "finite upper derivates but no convergence at f=" + std::to_string(f) +
                 " x=" + format_double(x);
        return false;
      }
    }
  }
  return true;
}

bool criterion_partition_engine(std::string& detail) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> value(1e-3, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Interval domain(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Gauge g = Gauge::constant(1.0);
    if (trial % 2 == 0) {
      g = Gauge::constant(value(rng));
    } else {
      const int pieces = 2 + static_cast<int>(unit(rng) * 7);
      std::vector<double> bps;
      for (int i = 1; i < pieces; ++i) bps.push_back(unit(rng));
      std::sort(bps.begin(), bps.end());
      bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
      std::vector<double> vals;
      for (std::size_t i = 0; i <= bps.size(); ++i) vals.push_back(value(rng));
      g = Gauge::piecewise_constant(bps, vals);
    }
    const TaggedPartition p = cousin_partition(domain, g);
    if (!is_fine(p, g) || !p.tiles(domain)) {
      detail = "trial " + std::to_string(trial) + " failed";
      return false;
    }
  }
  return true;
}

bool criterion_ac_family(std::string& detail) {
  const CantorScheme s = CantorScheme::fat();
  const FunctionModel F = FunctionModel::counterexample(s);

  // exactly representable residual-set sample
  std::vector<double> p_sample;
  for (const auto& iv : cantor_level_intervals(s, 10)) {
    for (double x : {rat_to_double(iv.lo), rat_to_double(iv.hi)}) {
      if (F(x) == 0.0) p_sample.push_back(x);
    }
  }
  const CheckReport on_p = ac_check(F, p_sample, 0.5, {0.1, 0.01, 1e-3});
  if (on_p.verdict != CheckVerdict::Certificate ||
      on_p.numeric_summary.at("maxAttackSum") != 0.0) {
    detail = "residual-set certificate not exact";
    return false;
  }

  const FunctionModel id = FunctionModel::polynomial(Interval(0.0, 1.0), {0.0, 1.0});
  std::vector<double> grid_pts;
  for (int i = 0; i <= 100; ++i) grid_pts.push_back(i / 100.0);
  const CheckReport lip = acr_check(id, grid_pts, 1.0, 0.01, {0.1, 0.01, 1e-3},
                                    {Gauge::constant(0.1), Gauge::constant(0.01),
                                     Gauge::constant(1e-3), Gauge::constant(1e-4)});
  if (lip.verdict != CheckVerdict::Certificate || lip.parameters.at("eta") != "0.01") {
    detail = "Lipschitz certificate did not land on eta = epsilon";
    return false;
  }

  std::vector<double> endpoints;
  for (const auto& iv : cantor_level_intervals(s, 10)) {
    endpoints.push_back(rat_to_double(iv.lo));
    endpoints.push_back(rat_to_double(iv.hi));
  }
  const CheckReport refuted = acr_check(F, endpoints, 1.0, 1.0, {0.1, 0.01, 1e-3},
                                        {Gauge::constant(0.1), Gauge::constant(0.01),
                                         Gauge::constant(1e-3), Gauge::constant(1e-4)});
  if (refuted.verdict != CheckVerdict::WitnessViolation) {
    detail = "tent function was not refuted";
    return false;
  }
  if (!(refuted.numeric_summary.at("witnessReEval") >= 1.0)) {
    detail = "witness does not re-evaluate above epsilon";
    return false;
  }
  detail = "witness sum " + format_double(refuted.numeric_summary.at("witnessReEval"));
  return true;
}

bool criterion_hkr_control(std::string& detail) {
  const FunctionModel F = FunctionModel::polynomial(Interval(0.0, 1.0), {0.0, 0.0, 0.5});
  const FunctionModel f = FunctionModel::polynomial(Interval(0.0, 1.0), {0.0, 1.0});
  const CheckReport report = hkr_check(F, f, 1e-3, {Gauge::constant(1e-3)}, 8, 1.0);
  if (report.verdict != CheckVerdict::Certificate) {
    detail = "no certificate";
    return false;
  }
  const double max_sum = report.numeric_summary.at("maxSampledSum");
  if (!(max_sum < 1e-3)) {
    detail = "max sampled sum " + format_double(max_sum);
    return false;
  }
  detail = "max sampled sum " + format_double(max_sum);
  return true;
}

bool criterion_quadrature_oracle(std::string& detail) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rs[] = {1.0, 1.5, 2.0, 3.0};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const FunctionModel F = random_pwl(rng, 2 + trial % 6, nullptr);
    const double x = 0.1 + 0.8 * unit(rng);
    const double alpha = 4.0 * unit(rng) - 2.0;
    const double r = rs[trial % 4];
    const Part part = static_cast<Part>(trial % 3);
    const double lo = unit(rng) * x;
    const double hi = x + (1.0 - x) * unit(rng);
    if (!(lo < hi)) continue;
    const QuadratureResult res =
        adaptive_lr_integral(F, Interval(lo, hi), IntegrandSpec{x, alpha, part}, r);
    const double ref = segmentwise_reference(F, x, alpha, lo, hi, r, part);
    const double scale = std::max({std::abs(ref), std::abs(res.value), 1e-30});
    worst = std::max(worst, std::abs(res.value - ref) / scale);
  }
  detail = "worst relative difference " + format_double(worst);
  return worst < 1e-10;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  run_criterion(1, "exact scheme geometry (n<=30)", 1.0, criterion_cantor_geometry);
  run_criterion(2, "bound identity (n<=40)", 1.0, criterion_bound_identity);
  run_criterion(3, "divergence vs bound (n<=12, r=1,2)", 30.0, criterion_divergence);
  run_criterion(4, "smooth-consistency suite", 60.0, criterion_smooth_consistency);
  run_criterion(5, "approximate vs deviation derivative", 0.0, criterion_approx_agreement);
  run_criterion(6, "finite upper derivates imply convergence", 0.0, criterion_gordon);
  run_criterion(7, "partition engine (1000 gauges)", 10.0, criterion_partition_engine);
  run_criterion(8, "absolute-continuity certificates", 0.0, criterion_ac_family);
  run_criterion(9, "deviation-sum positive control", 0.0, criterion_hkr_control);
  run_criterion(10, "quadrature oracle (100 models)", 0.0, criterion_quadrature_oracle);
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
