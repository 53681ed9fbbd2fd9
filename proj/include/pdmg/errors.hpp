#pragma once

#include <stdexcept>
#include <string>

namespace pdmg {

// Invalid user-supplied configuration: bad grid sizes, malformed fractions,
// inconsistent dimensions, out-of-range parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A linear operator required by the algorithm is singular (or numerically
// indistinguishable from singular): e.g. a shift that makes the coarsest-level
// matrix rank deficient, or a patch matrix with a vanishing eigenvalue.
class SingularOperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dense eigensolver failed to converge.  Rare, but it must surface as a
// numerical failure rather than silently wrong spectra.
class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdmg
