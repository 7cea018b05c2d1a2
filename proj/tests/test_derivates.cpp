#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gaugecalc/derivates.hpp"

using namespace gaugecalc;

namespace {

HGrid gap_midpoint_grid(const CantorScheme& s, int n_lo, int n_hi) {
  std::vector<double> scales;
  for (int n = n_lo; n <= n_hi; ++n) scales.push_back(rat_to_double(s.level_length(n)) / 2);
  return HGrid::from_scales(std::move(scales));
}

}  // namespace

TEST_CASE("h-grid generation and clipping") {
  const Interval dom(0.0, 1.0);
  const HGrid def;
  const auto mid = def.scales_at(dom, 0.5, Side::TwoSided);
  REQUIRE(mid.size() == 20);
  CHECK(mid.front() == doctest::Approx(0.05));
  CHECK(mid[1] == doctest::Approx(0.025));

  // near the edge the ladder clips to the available room
  const auto edge = HGrid::geometric(0.4, 0.5, 10).scales_at(dom, 0.1, Side::TwoSided);
  for (double h : edge) CHECK(h <= 0.1);
  CHECK(!edge.empty());

  const auto right = def.scales_at(dom, 0.0, Side::Right);
  CHECK(right.size() == 20);
  CHECK(def.scales_at(dom, 0.0, Side::Left).empty());

  CHECK_THROWS_AS(HGrid::geometric(0.1, 1.5, 10).scales_at(dom, 0.5, Side::TwoSided),
                  std::invalid_argument);
  CHECK_THROWS_AS(HGrid::geometric(0.1, 0.5, 2).scales_at(dom, 0.5, Side::TwoSided),
                  std::invalid_argument);

  const auto explicit_scales = HGrid::from_scales({0.2, 0.05, 0.4, 0.05}).scales_at(
      dom, 0.7, Side::TwoSided);
  REQUIRE(explicit_scales.size() == 2);  // 0.4 exceeds the room at 0.7, duplicate removed
  CHECK(explicit_scales[0] == 0.2);
  CHECK(explicit_scales[1] == 0.05);
}

TEST_CASE("ratio trend classification rules") {
  EstimatorOptions opts;
  std::vector<std::pair<double, double>> decaying, flat, growing, zeros;
  for (int k = 0; k < 12; ++k) {
    const double h = 0.1 * std::ldexp(1.0, -k);
    decaying.emplace_back(h, 0.5 * h);
    flat.emplace_back(h, 0.7);
    growing.emplace_back(h, 0.3 * std::ldexp(1.0, k));
    zeros.emplace_back(h, 0.0);
  }
  CHECK(classify_ratio_trend(decaying, 0.0, opts).verdict == Verdict::Converges);
  CHECK(classify_ratio_trend(decaying, 0.0, opts).slope == doctest::Approx(1.0));
  CHECK(classify_ratio_trend(flat, 0.0, opts).verdict == Verdict::Inconclusive);
  CHECK(classify_ratio_trend(growing, 0.0, opts).verdict == Verdict::Diverges);
  CHECK(classify_ratio_trend(zeros, 0.0, opts).verdict == Verdict::Converges);
}

TEST_CASE("phi ratio instances") {
  const FunctionModel line = FunctionModel::polynomial(Interval(0.0, 1.0), {1.0, 3.0});
  for (double h : {0.05, 0.2}) {
    CHECK(phi_ratio(line, 0.5, 3.0, h, LrParams{1.0, Side::TwoSided, Part::Abs}) == 0.0);
    CHECK(phi_ratio(line, 0.5, 3.0, h, LrParams{2.0, Side::Right, Part::Abs}) == 0.0);
  }

  const FunctionModel sq = FunctionModel::polynomial(Interval(-1.0, 1.0), {0.0, 0.0, 1.0});
  CHECK(phi_ratio(sq, 0.0, 0.0, 0.3, LrParams{1.0, Side::Right, Part::Abs}) ==
        doctest::Approx(0.1).epsilon(1e-10));

  const CantorScheme s = CantorScheme::fat();
  const FunctionModel F = FunctionModel::counterexample(s);
  const double h1 = rat_to_double(s.level_length(1)) / 2;  // x + h is the first plateau midpoint
  const double q1 = phi_ratio(F, 0.0, 0.0, h1, LrParams{1.0, Side::Right, Part::Abs});
  CHECK(q1 >= 0.24);
  CHECK(q1 < 1.0);
}

TEST_CASE("derivative estimation on smooth models") {
  const FunctionModel sq = FunctionModel::polynomial(Interval(0.0, 1.0), {0.0, 0.0, 1.0});
  const HGrid grid;
  for (double r : {1.0, 2.0}) {
    const DerivativeEstimate est = lr_derivative(sq, 0.5, r, grid);
    CHECK(est.verdict == Verdict::Converges);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-6));
  }

  const FunctionModel c = FunctionModel::polynomial(Interval(0.0, 1.0), {2.5});
  const DerivativeEstimate flat = lr_derivative(c, 0.3, 2.0, grid);
  CHECK(flat.verdict == Verdict::Converges);
  CHECK(flat.value == doctest::Approx(0.0).epsilon(1e-9));
  for (const auto& [h, ratio] : flat.residual_ratios) CHECK(ratio == 0.0);
}

TEST_CASE("the tent function on the fat scheme has no derivative at 0") {
  const CantorScheme s = CantorScheme::fat();
  const FunctionModel F = FunctionModel::counterexample(s);
  const HGrid grid = gap_midpoint_grid(s, 1, 12);
  for (double r : {1.0, 2.0}) {
    const DerivativeEstimate est = lr_derivative(F, 0.0, r, grid);
    CHECK(est.verdict == Verdict::Diverges);
  }
}

TEST_CASE("one-sided derivates of kinked and smooth models") {
  const FunctionModel vee = FunctionModel::scaled_power(Interval(-1.0, 1.0), 1.0, 0.0, 1.0);
  const HGrid grid;
  EstimatorOptions opts;
  const double tol = 1e-6;
  CHECK(one_sided_derivate(vee, 0.0, 1.0, DerivateKind::UpperRight, grid, opts).value ==
        doctest::Approx(1.0).epsilon(tol));
  CHECK(one_sided_derivate(vee, 0.0, 1.0, DerivateKind::LowerRight, grid, opts).value ==
        doctest::Approx(1.0).epsilon(tol));
  CHECK(one_sided_derivate(vee, 0.0, 1.0, DerivateKind::UpperLeft, grid, opts).value ==
        doctest::Approx(-1.0).epsilon(tol));
  CHECK(one_sided_derivate(vee, 0.0, 1.0, DerivateKind::LowerLeft, grid, opts).value ==
        doctest::Approx(-1.0).epsilon(tol));

  const FunctionModel line = FunctionModel::polynomial(Interval(0.0, 1.0), {1.0, 3.0});
  for (auto kind : {DerivateKind::UpperRight, DerivateKind::LowerRight, DerivateKind::UpperLeft,
                    DerivateKind::LowerLeft}) {
    const DerivateEstimate est = one_sided_derivate(line, 0.5, 2.0, kind, grid, opts);
    CHECK(est.verdict == Verdict::Converges);
    CHECK(est.value == doctest::Approx(3.0).epsilon(tol));
  }
}

TEST_CASE("upper-right derivate of the tent function at 0 is infinite") {
  const CantorScheme s = CantorScheme::fat();
  const FunctionModel F = FunctionModel::counterexample(s);
  const HGrid grid = gap_midpoint_grid(s, 1, 12);
  const DerivateEstimate est = one_sided_derivate(F, 0.0, 1.0, DerivateKind::UpperRight, grid);
  CHECK(std::isinf(est.value));
  CHECK(est.value > 0);
  CHECK(est.verdict == Verdict::Diverges);
}

TEST_CASE("reflection identities hold exactly at the estimator level") {
  const FunctionModel F = FunctionModel::piecewise_linear({0.0, 0.31, 0.62, 1.0},
                                                          {0.1, -0.7, 1.4, 0.3});
  const FunctionModel N = FunctionModel::negation(F);
  const FunctionModel R = FunctionModel::reflection(F);
  const FunctionModel NR = FunctionModel::negation(FunctionModel::reflection(F));
  const HGrid grid;
  EstimatorOptions opts;
  for (double x : {0.2, 0.31, 0.5, 0.77}) {
    for (double r : {1.0, 2.0}) {
      const double lower_right = one_sided_derivate(F, x, r, DerivateKind::LowerRight, grid, opts).value;
      const double ur_neg = one_sided_derivate(N, x, r, DerivateKind::UpperRight, grid, opts).value;
      CHECK(lower_right == -ur_neg);

      const double upper_left = one_sided_derivate(F, x, r, DerivateKind::UpperLeft, grid, opts).value;
      const double ur_nr = one_sided_derivate(NR, -x, r, DerivateKind::UpperRight, grid, opts).value;
      CHECK(upper_left == ur_nr);

      const double lower_left = one_sided_derivate(F, x, r, DerivateKind::LowerLeft, grid, opts).value;
      const double ur_r = one_sided_derivate(R, -x, r, DerivateKind::UpperRight, grid, opts).value;
      CHECK(lower_left == -ur_r);
    }
  }
}

TEST_CASE("four derivates bundle and agreement flag") {
  const HGrid grid;
  const FunctionModel sq = FunctionModel::polynomial(Interval(0.0, 1.0), {0.0, 0.0, 1.0});
  const FourDerivates smooth = four_derivates(sq, 0.5, 2.0, grid);
  CHECK(smooth.all_equal);
  CHECK(smooth.upper_right.value == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(smooth.spread < 1e-5);

  const FunctionModel kink = FunctionModel::scaled_power(Interval(0.0, 1.0), 1.0, 0.5, 1.0);
  const FourDerivates split = four_derivates(kink, 0.5, 1.0, grid);
  CHECK_FALSE(split.all_equal);
  CHECK(split.upper_right.value == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(split.upper_left.value == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(split.spread == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("deviation is midpoint-convex in the slope") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const FunctionModel F = FunctionModel::piecewise_linear({0.0, 0.4, 1.0}, {0.0, 1.0, -0.5});
  for (int trial = 0; trial < 40; ++trial) {
    const double x = 0.2 + 0.6 * unit(rng);
    const double h = 0.05 + 0.1 * unit(rng);
    const double a1 = 4.0 * unit(rng) - 2.0;
    const double a2 = 4.0 * unit(rng) - 2.0;
    const double r = 1.0 + (trial % 3);
    const LrParams p{r, Side::TwoSided, Part::Abs};
    const double f1 = lr_mean_deviation(F, x, a1, h, p).value;
    const double f2 = lr_mean_deviation(F, x, a2, h, p).value;
    const double fm = lr_mean_deviation(F, x, (a1 + a2) / 2, h, p).value;
    CHECK(fm <= (f1 + f2) / 2 + 1e-10);
  }
}

TEST_CASE("approximate derivative on density sets") {
  const HGrid grid;
  const FunctionModel sq = FunctionModel::polynomial(Interval(0.0, 1.0), {0.0, 0.0, 1.0});
  const DerivativeEstimate full = approx_derivative(sq, 0.3, dense_reals(), grid);
  CHECK(full.verdict == Verdict::Converges);
  CHECK(full.value == doctest::Approx(0.6).epsilon(1e-6));

  const CantorScheme s = CantorScheme::fat();
  const FunctionModel F = FunctionModel::counterexample(s);
  const DerivativeEstimate on_p = approx_derivative(F, 0.0, cantor_perfect_set(s), grid);
  CHECK(on_p.value == 0.0);
  CHECK(on_p.verdict == Verdict::Converges);

  const FunctionModel vee = FunctionModel::scaled_power(Interval(-1.0, 1.0), 1.0, 0.0, 1.0);
  const DensitySet positives = dense_predicate([](double y) { return y > 0; });
  const DerivativeEstimate right = approx_derivative(vee, 0.0, positives, grid);
  CHECK(right.value == doctest::Approx(1.0).epsilon(1e-9));
}
