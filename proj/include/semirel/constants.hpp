#ifndef SEMIREL_CONSTANTS_HPP
#define SEMIREL_CONSTANTS_HPP

#include "error.hpp"

#include <numbers>

namespace semirel {

inline constexpr double pi = std::numbers::pi;

// Hartree atomic units by default.
struct PhysicalConstants {
  double c = 137.035999084;
  double e = 1.0;
  double m = 1.0;
  double hbar = 1.0;

  void validate() const {
    if (!(c > 0.0) || !(e > 0.0) || !(m > 0.0) || !(hbar > 0.0)) {
      throw InvalidArgument("physical constants must be strictly positive");
    }
  }
};

}  // namespace semirel

#endif  // SEMIREL_CONSTANTS_HPP
