#ifndef SEMIREL_TDSE_HPP
#define SEMIREL_TDSE_HPP

// Split-step spectral propagation of the long-wavelength Hamiltonians
//
//   NR          q^2/(2m) + V
//   SR_LEADING  q^2/(2 mu) + V
//   SR_NEXT     q^2/(2 mu) - q^4/(8 mu^3 c^2) + V
//
// with q^2 = p^2 + 2 e A p_pol + (e^2 A^2/(m c)) p_prop and A, mu functions
// of t only (eta = omega t). Every momentum term is diagonal in spectral
// space, so the kinetic+field factor is an exact exponential of the
// time-integrated symbol; only the potential is split (Strang).

#include "eigensolver.hpp"
#include "gauge.hpp"
#include "grid.hpp"
#include "pulse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <limits>
#include <memory>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace semirel {

enum class QuantumVariant { nr, sr_leading, sr_next };

inline constexpr std::array<QuantumVariant, 3> all_quantum_variants{QuantumVariant::nr, QuantumVariant::sr_leading,
                                                                    QuantumVariant::sr_next};

inline std::string_view to_string(QuantumVariant v) {
  switch (v) {
    case QuantumVariant::nr: return "NR";
    case QuantumVariant::sr_leading: return "SR_LEADING";
    case QuantumVariant::sr_next: return "SR_NEXT";
  }
  return "";
}

inline std::optional<QuantumVariant> parse_quantum_variant(std::string_view s) {
  for (auto v : all_quantum_variants) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

struct WaveState {
  std::vector<complex> psi;
  double t = 0.0;
  double norm = 1.0;      // sum |psi|^2 dV after the last step
  double absorbed = 0.0;  // norm removed by the absorber so far
};

// Coefficients of the kinetic+field symbol
//   K(p) = c[0] P2 + c[1] px + c[2] pz + c[3] P2^2 + c[4] px^2 + c[5] pz^2
//        + c[6] P2 px + c[7] P2 pz + c[8] px pz,      P2 = px^2 + pz^2.
using SymbolCoefficients = std::array<double, 9>;

inline SymbolCoefficients kinetic_symbol(QuantumVariant v, double A, int dims, const PhysicalConstants& k) {
  const double mu = v == QuantumVariant::nr ? k.m : effective_mass(A, k);
  const double alpha = 2.0 * k.e * A;
  const double beta = dims == 2 ? k.e * k.e * A * A / (k.m * k.c) : 0.0;
  SymbolCoefficients c{};
  c[0] = 1.0 / (2.0 * mu);
  c[1] = alpha / (2.0 * mu);
  c[2] = beta / (2.0 * mu);
  if (v == QuantumVariant::sr_next) {
    const double g = -1.0 / (8.0 * mu * mu * mu * k.c * k.c);
    c[3] = g;
    c[4] = g * alpha * alpha;
    c[5] = g * beta * beta;
    c[6] = 2.0 * g * alpha;
    c[7] = 2.0 * g * beta;
    c[8] = 2.0 * g * alpha * beta;
  }
  return c;
}

namespace detail {
// 8-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 8> gl8_nodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                                 -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                                 0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> gl8_weights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                   0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                   0.2223810344533745, 0.1012285362903763};
}  // namespace detail

// Integral of the symbol coefficients over [t0, t1] (signed), in the long
// wavelength limit A = A(omega t). Split at the pulse edges where A has a
// jump in its second derivative.
inline SymbolCoefficients integrated_symbol(QuantumVariant v, double t0, double t1, int dims,
                                            const PulseParams& pulse, const PhysicalConstants& k) {
  SymbolCoefficients out{};
  std::array<double, 4> cuts{t0, t1, t1, t1};
  int n_cuts = 2;
  const double t_end = pulse_duration(pulse);
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  for (double edge : {0.0, t_end}) {
    if (edge > lo && edge < hi) cuts[n_cuts++] = edge;
  }
  std::sort(cuts.begin(), cuts.begin() + n_cuts);
  const double sign = t1 >= t0 ? 1.0 : -1.0;
  for (int s = 0; s + 1 < n_cuts; ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < detail::gl8_nodes.size(); ++q) {
      const double t = mid + half * detail::gl8_nodes[q];
      const auto c = kinetic_symbol(v, vector_potential(pulse.omega * t, pulse), dims, k);
      for (std::size_t i = 0; i < c.size(); ++i) out[i] += sign * half * detail::gl8_weights[q] * c[i];
    }
  }
  return out;
}

struct PropagatorOptions {
  bool absorber = true;
  double absorber_fraction = 0.1;  // outer fraction of each axis half-width
};

class SplitStepPropagator {
 public:
  SplitStepPropagator(const GridSpec& grid, const Potential& pot, const PulseParams& pulse, QuantumVariant v,
                      const PhysicalConstants& k = {}, PropagatorOptions opt = {})
      : grid_(grid), pulse_(pulse), k_(k), variant_(v), opt_(opt) {
    grid.validate();
    pulse.validate();
    k.validate();
    const std::size_t n = grid.size();
    potential_.resize(n);
    mask_.assign(n, 1.0);
    px_ = grid.wavenumbers(0);
    for (auto& p : px_) p *= k.hbar;
    if (grid.dims == 2) {
      pz_ = grid.wavenumbers(1);
      for (auto& p : pz_) p *= k.hbar;
    } else {
      pz_.assign(1, 0.0);
    }
    const auto x0 = grid.coordinates(0);
    const auto mask0 = axis_mask(0);
    if (grid.dims == 1) {
      for (int i = 0; i < grid.n[0]; ++i) {
        potential_[i] = pot.value_r2(x0[i] * x0[i]);
        mask_[i] = mask0[i];
      }
    } else {
      const auto x1 = grid.coordinates(1);
      const auto mask1 = axis_mask(1);
      for (int i = 0; i < grid.n[0]; ++i) {
        for (int j = 0; j < grid.n[1]; ++j) {
          const std::size_t idx = static_cast<std::size_t>(i) * grid.n[1] + j;
          potential_[idx] = pot.value_r2(x0[i] * x0[i] + x1[j] * x1[j]);
          mask_[idx] = mask0[i] * mask1[j];
        }
      }
    }
    scratch_.resize(n);
    plan_ = std::make_unique<FftPlan>(grid.shape(), scratch_.data());
    phase_.resize(n);
  }

  const GridSpec& grid() const { return grid_; }
  QuantumVariant variant() const { return variant_; }

  // One Strang step from state.t to t1 (t1 < state.t runs backwards and is
  // the exact inverse of the forward step when the absorber is off).
  void step_to(WaveState& state, double t1) {
    const double h = t1 - state.t;
    apply_potential_half(state.psi, h);
    apply_kinetic(state.psi, state.t, t1);
    apply_potential_half(state.psi, h);
    state.t = t1;
    const double before = grid_norm2(grid_, state.psi);
    if (opt_.absorber) {
      for (std::size_t i = 0; i < state.psi.size(); ++i) state.psi[i] *= mask_[i];
      state.norm = grid_norm2(grid_, state.psi);
      state.absorbed += before - state.norm;
    } else {
      state.norm = before;
    }
  }

  // exp(-i/hbar int_{t0}^{t1} K(p, t) dt) applied in spectral space.
  void apply_kinetic(std::vector<complex>& psi, double t0, double t1) {
    const SymbolCoefficients c = integrated_symbol(variant_, t0, t1, grid_.dims, pulse_, k_);
    plan_->forward(psi.data());
    const double inv_n = 1.0 / static_cast<double>(psi.size());
    const double ih = 1.0 / k_.hbar;
    const bool quartic = c[3] != 0.0 || c[4] != 0.0 || c[5] != 0.0 || c[6] != 0.0 || c[7] != 0.0 || c[8] != 0.0;
    const std::size_t nz = pz_.size();
    if (!quartic) {
      // Separable: exp(-i(c0 px^2 + c1 px)) exp(-i(c0 pz^2 + c2 pz)).
      std::vector<complex> fx(px_.size()), fz(nz);
      for (std::size_t i = 0; i < px_.size(); ++i)
        fx[i] = std::polar(inv_n, -ih * (c[0] * px_[i] * px_[i] + c[1] * px_[i]));
      for (std::size_t j = 0; j < nz; ++j) fz[j] = std::polar(1.0, -ih * (c[0] * pz_[j] * pz_[j] + c[2] * pz_[j]));
      for (std::size_t i = 0; i < px_.size(); ++i)
        for (std::size_t j = 0; j < nz; ++j) psi[i * nz + j] *= fx[i] * fz[j];
    } else {
      for (std::size_t i = 0; i < px_.size(); ++i) {
        const double x = px_[i];
        for (std::size_t j = 0; j < nz; ++j) {
          const double z = pz_[j];
          const double p2 = x * x + z * z;
          const double K = c[0] * p2 + c[1] * x + c[2] * z + c[3] * p2 * p2 + c[4] * x * x + c[5] * z * z +
                           c[6] * p2 * x + c[7] * p2 * z + c[8] * x * z;
          psi[i * nz + j] *= std::polar(inv_n, -ih * K);
        }
      }
    }
    plan_->backward(psi.data());
  }

  void apply_potential_half(std::vector<complex>& psi, double h) {
    if (h != cached_h_) {
      for (std::size_t i = 0; i < potential_.size(); ++i)
        phase_[i] = std::polar(1.0, -0.5 * h * potential_[i] / k_.hbar);
      cached_h_ = h;
    }
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= phase_[i];
  }

 private:
  std::vector<double> axis_mask(int axis) const {
    const auto x = grid_.coordinates(axis);
    const double L = grid_.L[axis];
    const double edge = (1.0 - opt_.absorber_fraction) * L;
    std::vector<double> m(x.size(), 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ax = std::fabs(x[i]);
      if (ax > edge) m[i] = std::pow(std::cos(0.5 * pi * (ax - edge) / (L - edge)), 0.125);
    }
    return m;
  }

  GridSpec grid_;
  PulseParams pulse_;
  PhysicalConstants k_;
  QuantumVariant variant_;
  PropagatorOptions opt_;
  std::vector<double> potential_;
  std::vector<double> mask_;
  std::vector<double> px_, pz_;
  std::vector<complex> scratch_;
  std::unique_ptr<FftPlan> plan_;
  std::vector<complex> phase_;
  double cached_h_ = std::numeric_limits<double>::quiet_NaN();
};

// One step of length dt.
inline void propagate(WaveState& psi, SplitStepPropagator& prop, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("propagate: dt must be > 0");
  prop.step_to(psi, psi.t + dt);
}

// Equal steps of at most dt from psi.t to t_end.
inline void propagate_until(WaveState& psi, SplitStepPropagator& prop, double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("propagate: dt must be > 0");
  if (t_end <= psi.t) return;
  const double t0 = psi.t;
  const long steps = static_cast<long>(std::ceil((t_end - t0) / dt - 1e-9));
  const double h = (t_end - t0) / steps;
  for (long s = 1; s <= steps; ++s) prop.step_to(psi, s == steps ? t_end : t0 + s * h);
}

struct BoundBasis {
  GridSpec grid;
  std::vector<double> energies;
  Eigen::MatrixXd states;  // columns normalized to sum phi^2 dV = 1 (real)

  int n_bound() const { return static_cast<int>(energies.size()); }

  // Returns the basis function as a wave state (real amplitudes).
  std::vector<complex> state(int i) const {
    std::vector<complex> out(static_cast<std::size_t>(states.rows()));
    for (Eigen::Index r = 0; r < states.rows(); ++r) out[r] = states(r, i);
    return out;
  }
};

struct GroundState {
  double energy = 0.0;
  WaveState psi;
  double residual = 0.0;
};

namespace detail {
inline std::vector<complex> grid_normalized(const GridSpec& grid, const Eigen::VectorXd& v) {
  std::vector<complex> out(static_cast<std::size_t>(v.size()));
  const double s = 1.0 / std::sqrt(grid.cell_volume());
  // Fix the overall sign so the amplitude at the largest entry is positive.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const double sign = v[imax] < 0.0 ? -1.0 : 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = sign * s * v[i];
  return out;
}
}  // namespace detail

// Lowest eigenpair of the field-free grid Hamiltonian. Requires a regular
// (soft-core) potential.
inline GroundState ground_state(const GridSpec& grid, const Potential& pot, const PhysicalConstants& k = {},
                                EigenOptions opt = {}) {
  if (pot.kind != PotentialKind::softcore || !(pot.a > 0.0))
    throw InvalidArgument("ground_state: needs a soft-core potential with a > 0");
  GridHamiltonian H(grid, pot, k);
  opt.guard = std::max(opt.guard, 3);
  const EigenResult r = lowest_eigenpairs(H, 1, opt);
  GroundState g;
  g.energy = r.values[0];
  g.residual = r.residuals[0];
  g.psi.psi = detail::grid_normalized(grid, r.vectors.col(0));
  g.psi.norm = grid_norm2(grid, g.psi.psi);
  return g;
}

// Semiclassical estimate of the number of bound states, used to size the
// eigensolver block: (1/2pi) int dA / r in 2D, (1/pi) int sqrt(2m|V|) dx in 1D.
inline int estimate_bound_count(const GridSpec& grid, const Potential& pot, const PhysicalConstants& k) {
  GridHamiltonian H(grid, pot, k);
  double sum = 0.0;
  for (double v : H.potential()) {
    if (v >= 0.0) continue;
    sum += grid.dims == 1 ? std::sqrt(2.0 * k.m * -v) / (pi * k.hbar) : k.m * -v / (2.0 * pi * k.hbar * k.hbar);
  }
  return static_cast<int>(std::ceil(sum * grid.cell_volume())) + 4;
}

// All eigenpairs of the field-free grid Hamiltonian with energy < 0.
inline BoundBasis bound_basis(const GridSpec& grid, const Potential& pot, const PhysicalConstants& k = {},
                              EigenOptions opt = {}) {
  GridHamiltonian H(grid, pot, k);
  const int guess = estimate_bound_count(grid, pot, k);
  opt.guard = std::max(opt.guard, guess / 2 + 4);
  const EigenResult r = eigenpairs_below(H, 0.0, guess, opt);
  BoundBasis b;
  b.grid = grid;
  b.energies.assign(r.values.data(), r.values.data() + r.values.size());
  b.states = r.vectors / std::sqrt(grid.cell_volume());
  return b;
}

// Population outside the field-free bound states, counting the norm already
// taken by the absorber as ionized: |psi|^2 - sum_n |<phi_n|psi>|^2 + absorbed.
inline double ionization_probability(const WaveState& psi, const BoundBasis& basis) {
  const auto n = static_cast<Eigen::Index>(psi.psi.size());
  if (n != basis.states.rows()) throw InvalidArgument("ionization_probability: basis built on a different grid");
  Eigen::VectorXd re(n), im(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    re[i] = psi.psi[i].real();
    im[i] = psi.psi[i].imag();
  }
  const double dv = basis.grid.cell_volume();
  const Eigen::VectorXd pr = basis.states.transpose() * re * dv;
  const Eigen::VectorXd pi_ = basis.states.transpose() * im * dv;
  const double bound = pr.squaredNorm() + pi_.squaredNorm();
  return grid_norm2(basis.grid, psi.psi) - bound + psi.absorbed;
}

}  // namespace semirel

#endif  // SEMIREL_TDSE_HPP
