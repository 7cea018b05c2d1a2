#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gaugecalc/funcmodel.hpp"

using namespace gaugecalc;

TEST_CASE("piecewise linear evaluation and validation") {
  const FunctionModel F = FunctionModel::piecewise_linear({0.0, 1.0}, {0.0, 1.0});
  CHECK(F(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(F(0.0) == 0.0);
  CHECK(F(1.0) == 1.0);
  CHECK_THROWS_AS(F(1.5), std::domain_error);

  const FunctionModel G = FunctionModel::piecewise_linear({0.0, 0.25, 1.0}, {1.0, -1.0, 3.0});
  CHECK(G(0.25) == -1.0);
  CHECK(G(0.125) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(G(0.625) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(FunctionModel::piecewise_linear({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(FunctionModel::piecewise_linear({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FunctionModel::piecewise_linear({0.0, 1.0}, {1.0, NAN}),
                  std::invalid_argument);
}

TEST_CASE("polynomial and scaled power evaluation") {
  const FunctionModel P = FunctionModel::polynomial(Interval(-1.0, 1.0), {1.0, 0.0, 2.0});
  CHECK(P(0.5) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(P(-1.0) == doctest::Approx(3.0).epsilon(1e-15));

  const FunctionModel A = FunctionModel::scaled_power(Interval(-1.0, 1.0), 1.0, 0.0, 1.0);
  CHECK(A(-0.25) == 0.25);
  CHECK(A(0.25) == 0.25);
  const FunctionModel S = FunctionModel::scaled_power(Interval(-1.0, 1.0), 2.0, 0.0, 3.0, true);
  CHECK(S(-0.5) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(S(0.5) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("counterexample evaluation at exact landmarks") {
  const FunctionModel F = FunctionModel::counterexample(CantorScheme::fat());
  CHECK(F(0.5) == -1.0);                 // plateau midpoint of the level-0 gap
  CHECK(F(0.0) == 0.0);                  // in the perfect set
  CHECK(F(1.0) == 0.0);
  CHECK(F(11.0 / 24.0) == -1.0);         // plateau endpoint
  CHECK(F(21.0 / 48.0) == doctest::Approx(-0.5).epsilon(1e-13));  // ramp midpoint
  CHECK(std::abs(F(5.0 / 12.0)) < 1e-12);  // gap endpoint, function vanishes
  // level-interval endpoints stay in the perfect set; double rounding of the
  // exact endpoints can graze an adjacent ramp, so allow roundoff-scale values
  const CantorScheme s = CantorScheme::fat();
  for (const auto& iv : cantor_level_intervals(s, 6)) {
    CHECK(std::abs(F(rat_to_double(iv.lo))) < 1e-9);
    CHECK(std::abs(F(rat_to_double(iv.hi))) < 1e-9);
  }
}

TEST_CASE("counterexample evaluation agrees with exact classification") {
  const CantorScheme s = CantorScheme::fat();
  const FunctionModel F = FunctionModel::counterexample(s);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double x = unit(rng);
    const PointClassification pc = classify_point(s, x, 20);
    const double fx = F(x);
    if (pc.kind == PointClass::OnPlateau) {
      CHECK(fx == cantor_plateau_value(pc.gap.level));
    } else if (pc.kind == PointClass::InPerfectSet) {
      CHECK(std::abs(fx) <= 1.0 / 20.0);
    } else {
      CHECK(std::abs(fx) <= std::abs(cantor_plateau_value(pc.gap.level)));
      CHECK(fx * cantor_plateau_value(pc.gap.level) >= 0.0);
    }
  }
}

TEST_CASE("uniform continuity sweep shrinks with the offset") {
  const FunctionModel F = FunctionModel::counterexample(CantorScheme::fat());
  double previous = 2.0;
  for (int k = 2; k <= 6; ++k) {
    const double offset = std::pow(10.0, -k);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const double x = i / 2000.0 * (1.0 - offset);
      worst = std::max(worst, std::abs(F(x + offset) - F(x)));
    }
    CHECK(worst <= previous + 1e-12);
    previous = worst;
    if (k == 6) CHECK(worst < 0.15);
  }
}

TEST_CASE("negation and reflection wrappers evaluate exactly") {
  const FunctionModel F = FunctionModel::piecewise_linear({0.0, 0.3, 1.0}, {0.5, -2.0, 1.25});
  const FunctionModel N = FunctionModel::negation(F);
  const FunctionModel R = FunctionModel::reflection(F);
  CHECK(R.domain().lo == -1.0);
  CHECK(R.domain().hi == 0.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = unit(rng);
    CHECK(N(x) == -F(x));
    CHECK(R(-x) == F(x));
  }
  const FunctionModel NR = FunctionModel::negation(FunctionModel::reflection(F));
  for (int i = 0; i < 50; ++i) {
    const double x = unit(rng);
    CHECK(NR(-x) == -F(x));
  }
}

TEST_CASE("breakpoints are sorted and wrappers remap them") {
  const FunctionModel F = FunctionModel::counterexample(CantorScheme::fat(), 60, 6);
  const auto& bps = F.breakpoints();
  CHECK(bps.size() == 4 * ((1u << 6) - 1));
  CHECK(std::is_sorted(bps.begin(), bps.end()));

  const FunctionModel R = FunctionModel::reflection(F);
  const auto& rbps = R.breakpoints();
  CHECK(rbps.size() == bps.size());
  CHECK(std::is_sorted(rbps.begin(), rbps.end()));
  CHECK(rbps.front() == -bps.back());
}

TEST_CASE("affine_on reports pieces correctly") {
  const FunctionModel G = FunctionModel::piecewise_linear({0.0, 0.25, 1.0}, {1.0, -1.0, 3.0});
  auto piece = G.affine_on(0.05, 0.2);
  REQUIRE(piece.has_value());
  CHECK(piece->slope == doctest::Approx(-8.0));
  CHECK_FALSE(G.affine_on(0.2, 0.3).has_value());

  const FunctionModel F = FunctionModel::counterexample(CantorScheme::fat());
  auto plateau = F.affine_on(0.47, 0.53);
  REQUIRE(plateau.has_value());
  CHECK(plateau->slope == 0.0);
  auto ramp = F.affine_on(0.42, 0.45);  // inside the left ramp [5/12, 11/24]
  REQUIRE(ramp.has_value());
  CHECK(ramp->slope == doctest::Approx(-24.0));  // value -1 over width 1/24
  CHECK_FALSE(F.affine_on(0.40, 0.45).has_value());  // straddles the gap edge

  const FunctionModel P = FunctionModel::polynomial(Interval(0.0, 1.0), {0.0, 3.0});
  auto linear = P.affine_on(0.1, 0.9);
  REQUIRE(linear.has_value());
  CHECK(linear->slope == 3.0);
}
