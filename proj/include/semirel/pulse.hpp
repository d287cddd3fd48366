#ifndef SEMIREL_PULSE_HPP
#define SEMIREL_PULSE_HPP

#include "constants.hpp"
#include "error.hpp"
#include "vec3.hpp"

#include <cmath>
#include <string>

namespace semirel {

// Linearly polarized plane-wave pulse with a sin^2 envelope on the vector
// potential:
//
//   A(eta) = (E0/omega) sin^2(eta/(2N)) sin(eta + cep),  eta in [0, 2 pi N]
//   eta    = omega t - (omega/c) k.r
//
// The field is zero outside the phase support.
struct PulseParams {
  double E0 = 0.0;
  double omega = 1.0;
  int n_cycles = 1;
  double cep = 0.0;
  Vec3 pol{1.0, 0.0, 0.0};
  Vec3 prop{0.0, 0.0, 1.0};

  // Throws InvalidArgument describing the first violated invariant.
  void validate() const {
    if (!(omega > 0.0)) throw InvalidArgument("pulse.omega must be > 0");
    if (!(E0 >= 0.0)) throw InvalidArgument("pulse.E0 must be >= 0");
    if (n_cycles < 1) throw InvalidArgument("pulse.n_cycles must be >= 1");
    if (std::fabs(norm(pol) - 1.0) > 1e-12) throw InvalidArgument("pulse.polarization must be a unit vector");
    if (std::fabs(norm(prop) - 1.0) > 1e-12) throw InvalidArgument("pulse.propagation must be a unit vector");
    if (std::fabs(dot(pol, prop)) > 1e-12) throw InvalidArgument("pulse.polarization must be orthogonal to pulse.propagation");
  }
};

struct FieldSample {
  Vec3 A;
  Vec3 E;
  double eta = 0.0;
};

inline double pulse_end_phase(const PulseParams& p) { return 2.0 * pi * p.n_cycles; }

// Duration in time at fixed position.
inline double pulse_duration(const PulseParams& p) { return pulse_end_phase(p) / p.omega; }

// e E0 / (m omega c): peak classical velocity over c.
inline double quiver_parameter(const PulseParams& p, const PhysicalConstants& k) {
  return k.e * p.E0 / (k.m * p.omega * k.c);
}

inline double phase(double t, const Vec3& r, const PulseParams& p, const PhysicalConstants& k) {
  return p.omega * t - (p.omega / k.c) * dot(p.prop, r);
}

inline bool in_support(double eta, const PulseParams& p) {
  return eta >= 0.0 && eta <= pulse_end_phase(p);
}

inline double envelope(double eta, const PulseParams& p) {
  if (!in_support(eta, p)) return 0.0;
  const double s = std::sin(eta / (2.0 * p.n_cycles));
  return s * s;
}

// Scalar amplitude along p.pol.
inline double vector_potential(double eta, const PulseParams& p) {
  if (!in_support(eta, p)) return 0.0;
  const double s = std::sin(eta / (2.0 * p.n_cycles));
  return (p.E0 / p.omega) * s * s * std::sin(eta + p.cep);
}

// dA/deta, analytic.
inline double vector_potential_derivative(double eta, const PulseParams& p) {
  if (!in_support(eta, p)) return 0.0;
  const double n = p.n_cycles;
  const double s = std::sin(eta / (2.0 * n));
  const double env_prime = std::sin(eta / n) / (2.0 * n);
  return (p.E0 / p.omega) * (env_prime * std::sin(eta + p.cep) + s * s * std::cos(eta + p.cep));
}

// E = -dA/dt = -omega dA/deta (scalar amplitude along p.pol).
inline double electric_field(double eta, const PulseParams& p) {
  return -p.omega * vector_potential_derivative(eta, p);
}

inline FieldSample sample_field(double t, const Vec3& r, const PulseParams& p, const PhysicalConstants& k) {
  FieldSample s;
  s.eta = phase(t, r, p, k);
  s.A = vector_potential(s.eta, p) * p.pol;
  s.E = electric_field(s.eta, p) * p.pol;
  return s;
}

}  // namespace semirel

#endif  // SEMIREL_PULSE_HPP
