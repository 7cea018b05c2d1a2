#include "gaugecalc/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace gaugecalc {

Rational rat_pow2(int k) {
  Rational q(1);
  if (k >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(k));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-k));
  }
  return q;
}

Rational rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: nonfinite value");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

std::string rat_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rat_parse(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) {
    throw std::invalid_argument("rat_parse: malformed rational '" + text + "'");
  }
  if (q.get_den() == 0) {
    throw std::invalid_argument("rat_parse: zero denominator in '" + text + "'");
  }
  q.canonicalize();
  return q;
}

}  // namespace gaugecalc
