#ifndef SEMIREL_POTENTIAL_HPP
#define SEMIREL_POTENTIAL_HPP

#include "error.hpp"
#include "vec3.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace semirel {

enum class PotentialKind { none, coulomb, softcore };

// V(r) = -Z/|r| (coulomb), -Z/sqrt(|r|^2 + a^2) (softcore), 0 (none).
struct Potential {
  PotentialKind kind = PotentialKind::none;
  double Z = 1.0;
  double a = 0.0;
  // Coulomb evaluations closer than this to the origin are rejected.
  double r_min = 1e-8;

  static Potential none() { return {}; }
  static Potential coulomb(double Z = 1.0) { return {PotentialKind::coulomb, Z, 0.0}; }
  static Potential softcore(double Z, double a) { return {PotentialKind::softcore, Z, a}; }

  bool singular_at(double r2) const {
    return kind == PotentialKind::coulomb && r2 < r_min * r_min;
  }

  double value(const Vec3& r) const {
    const double r2 = norm2(r);
    switch (kind) {
      case PotentialKind::none:
        return 0.0;
      case PotentialKind::coulomb:
        if (singular_at(r2)) throw SingularityError("Coulomb singularity: |r| below r_min");
        return -Z / std::sqrt(r2);
      case PotentialKind::softcore:
        return -Z / std::sqrt(r2 + a * a);
    }
    return 0.0;
  }

  // Radial profile for grid code (r2 = |r|^2).
  double value_r2(double r2) const {
    switch (kind) {
      case PotentialKind::none:
        return 0.0;
      case PotentialKind::coulomb:
        return -Z / std::sqrt(r2);
      case PotentialKind::softcore:
        return -Z / std::sqrt(r2 + a * a);
    }
    return 0.0;
  }

  Vec3 gradient(const Vec3& r) const {
    const double r2 = norm2(r);
    switch (kind) {
      case PotentialKind::none:
        return {};
      case PotentialKind::coulomb: {
        if (singular_at(r2)) throw SingularityError("Coulomb singularity: |r| below r_min");
        const double inv = 1.0 / std::sqrt(r2);
        return (Z * inv * inv * inv) * r;
      }
      case PotentialKind::softcore: {
        const double s2 = r2 + a * a;
        return (Z / (s2 * std::sqrt(s2))) * r;
      }
    }
    return {};
  }
};

inline std::string_view to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::none: return "none";
    case PotentialKind::coulomb: return "coulomb";
    case PotentialKind::softcore: return "softcore";
  }
  return "none";
}

inline std::optional<PotentialKind> parse_potential_kind(std::string_view s) {
  if (s == "none") return PotentialKind::none;
  if (s == "coulomb") return PotentialKind::coulomb;
  if (s == "softcore") return PotentialKind::softcore;
  return std::nullopt;
}

}  // namespace semirel

#endif  // SEMIREL_POTENTIAL_HPP
