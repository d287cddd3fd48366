#ifndef SEMIREL_GAUGE_HPP
#define SEMIREL_GAUGE_HPP

// Propagation-gauge quantities evaluated with commuting (classical)
// variables. A is the scalar vector-potential amplitude along pulse.pol.

#include "constants.hpp"
#include "pulse.hpp"
#include "quadrature.hpp"
#include "vec3.hpp"

#include <algorithm>
#include <cmath>

namespace semirel {

struct GaugeEval {
  double mu = 0.0;
  Vec3 d;
  double xi = 0.0;
  double q2 = 0.0;
};

// Field-dressed mass m (1 + e^2 A^2 / (2 m^2 c^2)).
inline double effective_mass(double A, const PhysicalConstants& k) {
  return k.m * (1.0 + (k.e * k.e * A * A) / (2.0 * k.m * k.m * k.c * k.c));
}

// d(mu)/dA
inline double effective_mass_derivative(double A, const PhysicalConstants& k) {
  return k.e * k.e * A / (k.m * k.c * k.c);
}

// d = p + e A pol + (e^2 A^2 / (2 m c)) prop
inline Vec3 kinetic_momentum(const Vec3& p, double A, const PulseParams& pulse, const PhysicalConstants& k) {
  return p + (k.e * A) * pulse.pol + (k.e * k.e * A * A / (2.0 * k.m * k.c)) * pulse.prop;
}

// q^2 = p^2 + 2 e A (pol.p) + (e^2 A^2/(m c)) (prop.p); anti-commutators
// collapse to ordinary products for commuting variables.
inline double q_squared_classical(const Vec3& p, double A, const PulseParams& pulse, const PhysicalConstants& k) {
  return norm2(p) + 2.0 * k.e * A * dot(pulse.pol, p) +
         (k.e * k.e * A * A / (k.m * k.c)) * dot(pulse.prop, p);
}

inline constexpr double gauge_quadrature_tolerance = 1e-12;

// xi(eta) = -(e/(2 m omega)) * integral_{-inf}^{eta} A(eta')^2 deta'.
// The integrand vanishes before the pulse, so the range is clipped to the
// support and split at half-cycle boundaries before adaptive refinement.
inline double gauge_function(double eta, const PulseParams& pulse, const PhysicalConstants& k,
                             double abs_tol = gauge_quadrature_tolerance) {
  const double upper = std::min(eta, pulse_end_phase(pulse));
  if (upper <= 0.0 || pulse.E0 == 0.0) return 0.0;
  auto a2 = [&pulse](double x) {
    const double a = vector_potential(x, pulse);
    return a * a;
  };
  const int panels = std::max(1, static_cast<int>(std::ceil(upper / pi)));
  const double width = upper / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = i * width;
    const double hi = (i + 1 == panels) ? upper : (i + 1) * width;
    sum += integrate_adaptive(a2, lo, hi, abs_tol / panels).value;
  }
  return -(k.e / (2.0 * k.m * pulse.omega)) * sum;
}

inline GaugeEval evaluate_gauge(const Vec3& p, double eta, const PulseParams& pulse, const PhysicalConstants& k) {
  const double A = vector_potential(eta, pulse);
  GaugeEval g;
  g.mu = effective_mass(A, k);
  g.d = kinetic_momentum(p, A, pulse, k);
  g.xi = gauge_function(eta, pulse, k);
  g.q2 = q_squared_classical(p, A, pulse, k);
  return g;
}

}  // namespace semirel

#endif  // SEMIREL_GAUGE_HPP
