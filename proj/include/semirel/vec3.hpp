#ifndef SEMIREL_VEC3_HPP
#define SEMIREL_VEC3_HPP

#include <array>
#include <cmath>

namespace semirel {

// Small fixed-size real 3-vector. Aggregate, so {x, y, z} initialization works.
struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }

  constexpr double x() const { return v[0]; }
  constexpr double y() const { return v[1]; }
  constexpr double z() const { return v[2]; }

  constexpr Vec3& operator+=(const Vec3& o) {
    v[0] += o.v[0]; v[1] += o.v[1]; v[2] += o.v[2];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    v[0] -= o.v[0]; v[1] -= o.v[1]; v[2] -= o.v[2];
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    v[0] *= s; v[1] *= s; v[2] *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

constexpr double norm2(const Vec3& a) { return dot(a, a); }

inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

inline double max_abs(const Vec3& a) {
  return std::fmax(std::fabs(a[0]), std::fmax(std::fabs(a[1]), std::fabs(a[2])));
}

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

}  // namespace semirel

#endif  // SEMIREL_VEC3_HPP
