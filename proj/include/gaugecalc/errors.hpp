#ifndef GAUGECALC_ERRORS_HPP
#define GAUGECALC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gaugecalc {

// Thrown when a computation exceeds a configured depth/size budget
// (interval enumeration caps, Cousin bisection depth, quadrature budgets).
class resource_error : public std::runtime_error {
public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed input specs (JSON function specs, partition files).
class spec_error : public std::invalid_argument {
public:
  explicit spec_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace gaugecalc

#endif
