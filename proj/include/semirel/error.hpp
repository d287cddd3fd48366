#ifndef SEMIREL_ERROR_HPP
#define SEMIREL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace semirel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input parameters (pulse geometry, grid sizes, configuration values).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Quadrature, eigensolver or ground-state iteration failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Evaluation too close to a Coulomb singularity.
class SingularityError : public Error {
 public:
  using Error::Error;
};

}  // namespace semirel

#endif  // SEMIREL_ERROR_HPP
