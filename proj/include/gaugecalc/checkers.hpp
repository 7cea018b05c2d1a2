#ifndef GAUGECALC_CHECKERS_HPP
#define GAUGECALC_CHECKERS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaugecalc/gauges.hpp"

namespace gaugecalc {

// The definitional quantifiers range over all gauges and partitions, which no
// finite search decides.  A Certificate is evidence (the searched ladders are
// recorded); a WitnessViolation is a proof (the witness re-evaluates above the
// claimed threshold).
enum class CheckVerdict { Certificate, WitnessViolation, Inconclusive };

struct VerifyRow {
  int n = 0;
  double r = 1.0;
  double h = 0.0;
  double q = 0.0;      // measured ratio at scale h
  double bound = 0.0;  // closed-form lower bound
  bool pass = false;
  bool inconclusive = false;
};

struct CheckReport {
  CheckVerdict verdict = CheckVerdict::Inconclusive;
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> numeric_summary;
  std::optional<TaggedPartition> witness_partition;
  std::vector<Interval> witness_intervals;
  std::vector<VerifyRow> rows;
};

// Samples Riemann-type deviation sums over Cousin partitions plus randomized
// refinements for each gauge in the ladder (coarse to fine).  Certificate when
// some gauge keeps every sampled sum below epsilon.
CheckReport hkr_check(const FunctionModel& F, const FunctionModel& f, double epsilon,
                      const std::vector<Gauge>& gauge_ladder, int trials, double r = 1.0,
                      std::uint64_t seed = 1);

// Attacks every (eta, gauge) pair with the adversarial partition search;
// certificate when a pair survives with max ac_sum below epsilon.  The eta
// ladder is augmented with epsilon itself (the natural Lipschitz choice).
CheckReport acr_check(const FunctionModel& F, const std::vector<double>& E, double r,
                      double epsilon, std::vector<double> eta_ladder,
                      const std::vector<Gauge>& gauge_ladder, long budget = 10000,
                      std::uint64_t seed = 1);

// Classical absolute-continuity attack: finite nonoverlapping interval
// collections with endpoints in E, total length below eta, maximizing
// Σ |F(d)-F(c)|.
CheckReport ac_check(const FunctionModel& F, const std::vector<double>& E, double epsilon,
                     std::vector<double> eta_ladder, long budget = 10000);

// Closed-form divergence bound 2^{n+2}(n+2) / (n (n+4)^{1+1/r} (n+3)^{1/r})
// for the shipped scheme; requires n >= 1 and r >= 1.  The equivalent
// intermediate form 2^{1-1/r}/(n r_n) (u_n/r_n)^{1/r} is checked against it to
// 1e-12 relative on every call.
double counterexample_bound(int n, double r);
double counterexample_bound_intermediate(int n, double r);

// For x = 0, h = r_n/2 (so x + h is the midpoint of the leftmost level-n
// plateau) and alpha = 0, checks the measured ratio against the closed-form
// bound for each n and r.  alpha = 0 serves both parities of n.
CheckReport counterexample_verify(const CantorScheme& scheme, int n_lo, int n_hi,
                                  const std::vector<double>& r_list, double tol = 1e-6,
                                  int depth_cap = 60);

}  // namespace gaugecalc

#endif
