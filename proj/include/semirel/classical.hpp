#ifndef SEMIREL_CLASSICAL_HPP
#define SEMIREL_CLASSICAL_HPP

// Classical Hamiltonian functions with full plane-wave spatial dependence:
// A and mu are evaluated at eta = omega t - (omega/c) prop.r, so every
// r-derivative carries d(eta)/dr = -(omega/c) prop.

#include "constants.hpp"
#include "gauge.hpp"
#include "potential.hpp"
#include "pulse.hpp"
#include "vec3.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string_view>

namespace semirel {

enum class HamiltonianVariant {
  rel_minimal,       // sqrt(m^2c^4 + |p + eA|^2 c^2) - mc^2 + V
  rel_propgauge,     // sqrt(m^2c^4 + |d|^2 c^2) - mc^2 + V - e^2A^2/(2m)
  nonrel_propgauge,  // semirel with mu -> m
  semirel,           // q^2/(2 mu) + V
};

inline constexpr std::array<HamiltonianVariant, 4> all_hamiltonian_variants{
    HamiltonianVariant::rel_minimal, HamiltonianVariant::rel_propgauge,
    HamiltonianVariant::nonrel_propgauge, HamiltonianVariant::semirel};

inline std::string_view to_string(HamiltonianVariant v) {
  switch (v) {
    case HamiltonianVariant::rel_minimal: return "REL_MINIMAL";
    case HamiltonianVariant::rel_propgauge: return "REL_PROPGAUGE";
    case HamiltonianVariant::nonrel_propgauge: return "NONREL_PROPGAUGE";
    case HamiltonianVariant::semirel: return "SEMIREL";
  }
  return "";
}

inline std::optional<HamiltonianVariant> parse_hamiltonian_variant(std::string_view s) {
  for (auto v : all_hamiltonian_variants) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

inline bool is_relativistic(HamiltonianVariant v) {
  return v == HamiltonianVariant::rel_minimal || v == HamiltonianVariant::rel_propgauge;
}

struct ClassicalState {
  Vec3 r;
  Vec3 p;  // canonical momentum
  double t = 0.0;
};

struct PhaseVelocity {
  Vec3 dr;
  Vec3 dp;
};

// Everything the variants need about the field at one point.
struct LocalField {
  double A = 0.0;
  double dA = 0.0;  // dA/deta
  Vec3 grad_eta;
};

// plane_wave: eta = omega t - (omega/c) k.r. long_wavelength: eta = omega t,
// the field is uniform in space (but keeps its k-directed drift term).
enum class FieldModel { plane_wave, long_wavelength };

inline double field_phase(double t, const Vec3& r, const PulseParams& pulse, const PhysicalConstants& k,
                          FieldModel model) {
  return model == FieldModel::plane_wave ? phase(t, r, pulse, k) : pulse.omega * t;
}

inline LocalField local_field(double t, const Vec3& r, const PulseParams& pulse, const PhysicalConstants& k,
                              FieldModel model = FieldModel::plane_wave) {
  const double eta = field_phase(t, r, pulse, k, model);
  return {vector_potential(eta, pulse), vector_potential_derivative(eta, pulse),
          model == FieldModel::plane_wave ? -(pulse.omega / k.c) * pulse.prop : Vec3{}};
}

// Mechanical momentum for the variant's canonical momentum. After the pulse
// it coincides with p for every variant.
inline Vec3 kinetic_momentum_of(HamiltonianVariant v, const Vec3& p, double A, const PulseParams& pulse,
                                const PhysicalConstants& k) {
  if (v == HamiltonianVariant::rel_minimal) return p + (k.e * A) * pulse.pol;
  return kinetic_momentum(p, A, pulse, k);
}

// sqrt(m^2c^4 + p^2c^2) - mc^2 without the cancellation at small p.
inline double relativistic_kinetic_energy(double p2, const PhysicalConstants& k) {
  const double mc2 = k.m * k.c * k.c;
  return p2 * k.c * k.c / (std::sqrt(mc2 * mc2 + p2 * k.c * k.c) + mc2);
}

inline double hamiltonian_value(const ClassicalState& s, HamiltonianVariant v, const Potential& pot,
                                const PulseParams& pulse, const PhysicalConstants& k,
                                FieldModel model = FieldModel::plane_wave) {
  const double A = vector_potential(field_phase(s.t, s.r, pulse, k, model), pulse);
  const double V = pot.value(s.r);
  switch (v) {
    case HamiltonianVariant::rel_minimal: {
      const Vec3 pi_kin = s.p + (k.e * A) * pulse.pol;
      return relativistic_kinetic_energy(norm2(pi_kin), k) + V;
    }
    case HamiltonianVariant::rel_propgauge: {
      const Vec3 d = kinetic_momentum(s.p, A, pulse, k);
      return relativistic_kinetic_energy(norm2(d), k) + V - k.e * k.e * A * A / (2.0 * k.m);
    }
    case HamiltonianVariant::nonrel_propgauge:
      return q_squared_classical(s.p, A, pulse, k) / (2.0 * k.m) + V;
    case HamiltonianVariant::semirel:
      return q_squared_classical(s.p, A, pulse, k) / (2.0 * effective_mass(A, k)) + V;
  }
  return 0.0;
}

// Hamilton's equations dr/dt = dH/dp, dp/dt = -dH/dr, analytic.
inline PhaseVelocity equations_of_motion(const ClassicalState& s, HamiltonianVariant v, const Potential& pot,
                                         const PulseParams& pulse, const PhysicalConstants& k,
                                         FieldModel model = FieldModel::plane_wave) {
  const LocalField f = local_field(s.t, s.r, pulse, k, model);
  const Vec3 gradV = pot.gradient(s.r);
  const double e = k.e;
  const double mc2 = k.m * k.c * k.c;
  PhaseVelocity out;
  double dH_deta = 0.0;

  switch (v) {
    case HamiltonianVariant::rel_minimal: {
      const Vec3 pi_kin = s.p + (e * f.A) * pulse.pol;
      const double W = std::sqrt(mc2 * mc2 + norm2(pi_kin) * k.c * k.c);
      out.dr = (k.c * k.c / W) * pi_kin;
      dH_deta = (k.c * k.c / W) * dot(pi_kin, pulse.pol) * e * f.dA;
      break;
    }
    case HamiltonianVariant::rel_propgauge: {
      const Vec3 d = kinetic_momentum(s.p, f.A, pulse, k);
      const double W = std::sqrt(mc2 * mc2 + norm2(d) * k.c * k.c);
      out.dr = (k.c * k.c / W) * d;
      const Vec3 dd_deta = (e * f.dA) * pulse.pol + (e * e * f.A * f.dA / (k.m * k.c)) * pulse.prop;
      dH_deta = (k.c * k.c / W) * dot(d, dd_deta) - e * e * f.A * f.dA / k.m;
      break;
    }
    case HamiltonianVariant::nonrel_propgauge:
    case HamiltonianVariant::semirel: {
      const bool dressed = v == HamiltonianVariant::semirel;
      const double mu = dressed ? effective_mass(f.A, k) : k.m;
      const double dmu_deta = dressed ? effective_mass_derivative(f.A, k) * f.dA : 0.0;
      // dH/dp = (p + e A pol + e^2 A^2/(2mc) prop) / mu
      out.dr = kinetic_momentum(s.p, f.A, pulse, k) / mu;
      const double q2 = q_squared_classical(s.p, f.A, pulse, k);
      const double dq2_deta =
          2.0 * e * f.dA * dot(pulse.pol, s.p) + (2.0 * e * e * f.A * f.dA / (k.m * k.c)) * dot(pulse.prop, s.p);
      dH_deta = dq2_deta / (2.0 * mu) - q2 * dmu_deta / (2.0 * mu * mu);
      break;
    }
  }
  out.dp = -(dH_deta * f.grad_eta + gradV);
  return out;
}

}  // namespace semirel

#endif  // SEMIREL_CLASSICAL_HPP
