#pragma once

#include <stdexcept>
#include <string>

namespace stharm {

/// A theorem's curvature or diameter hypothesis fails on the input; verdicts
/// are never emitted on inadmissible inputs.
class hypothesis_error : public std::domain_error {
 public:
  hypothesis_error(const std::string& what, double rho, double value)
      : std::domain_error(what), rho(rho), value(value) {}
  double rho = 0.0;
  double value = 0.0;
};

/// A proved inequality came out violated beyond the discretization
/// allowance: either a solver bug or a genuine counterexample. Loud.
class falsified_error : public std::runtime_error {
 public:
  explicit falsified_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stharm
