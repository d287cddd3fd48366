#ifndef SEMIREL_QUADRATURE_HPP
#define SEMIREL_QUADRATURE_HPP

#include "error.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace semirel {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (symmetric half, node 0 last).
inline constexpr std::array<double, 8> gk15_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> gk15_gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadratureResult gk15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * gk15_kronrod_weights[7];
  double gauss = fc * gk15_gauss_weights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * gk15_nodes[i];
    const double sum = f(mid - dx) + f(mid + dx);
    kronrod += gk15_kronrod_weights[i] * sum;
    if (i % 2 == 1) gauss += gk15_gauss_weights[i / 2] * sum;
  }
  return {kronrod * half, std::fabs((kronrod - gauss) * half)};
}

template <class F>
QuadratureResult adaptive_gk15(F& f, double a, double b, double abs_tol, int depth) {
  const QuadratureResult whole = gk15(f, a, b);
  const double floor_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(whole.value);
  if (whole.error <= abs_tol || whole.error <= floor_tol) return whole;
  if (depth <= 0) {
    throw NumericalError("adaptive quadrature did not converge to the requested tolerance");
  }
  const double mid = 0.5 * (a + b);
  const QuadratureResult left = adaptive_gk15(f, a, mid, 0.5 * abs_tol, depth - 1);
  const QuadratureResult right = adaptive_gk15(f, mid, b, 0.5 * abs_tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace detail

// Adaptive Gauss-Kronrod (7/15) on [a, b], bisecting until each panel's
// Kronrod/Gauss difference is below its share of abs_tol or at round-off
// level relative to the panel value. Throws NumericalError after max_depth
// bisections.
template <class F>
QuadratureResult integrate_adaptive(F f, double a, double b, double abs_tol, int max_depth = 40) {
  if (a == b) return {};
  if (b < a) {
    QuadratureResult r = integrate_adaptive(f, b, a, abs_tol, max_depth);
    r.value = -r.value;
    return r;
  }
  return detail::adaptive_gk15(f, a, b, abs_tol, max_depth);
}

}  // namespace semirel

#endif  // SEMIREL_QUADRATURE_HPP
