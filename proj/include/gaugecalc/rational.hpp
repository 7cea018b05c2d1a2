#ifndef GAUGECALC_RATIONAL_HPP
#define GAUGECALC_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace gaugecalc {

// Arbitrary-precision rational; GMP keeps values canonical (reduced, q > 0).
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// 2^k, k may be negative.
Rational rat_pow2(int k);

// Exact conversion; every finite double is a dyadic rational.
Rational rat_from_double(double x);

inline double rat_to_double(const Rational& q) { return q.get_d(); }

// Canonical "p/q" form, or plain "p" when the denominator is 1.
std::string rat_to_string(const Rational& q);

// Parses "p/q" or "p". Throws std::invalid_argument on malformed input or q == 0.
Rational rat_parse(const std::string& text);

}  // namespace gaugecalc

#endif
