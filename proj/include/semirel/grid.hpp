#ifndef SEMIREL_GRID_HPP
#define SEMIREL_GRID_HPP

#include "constants.hpp"
#include "error.hpp"
#include "fft.hpp"
#include "potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <vector>

namespace semirel {

// Uniform periodic grid, 1D (polarization axis) or 2D (polarization,
// propagation). Axis 0 varies slowest in memory. Points x_j = -L + j dx.
struct GridSpec {
  int dims = 1;
  std::array<double, 2> L{100.0, 100.0};
  std::array<int, 2> n{1024, 1024};

  static GridSpec one_d(int n, double L) { return {1, {L, L}, {n, n}}; }
  static GridSpec two_d(int n, double L) { return {2, {L, L}, {n, n}}; }

  void validate() const {
    if (dims != 1 && dims != 2) throw InvalidArgument("grid.dims must be 1 or 2");
    for (int a = 0; a < dims; ++a) {
      if (n[a] < 64 || (n[a] & (n[a] - 1)) != 0) throw InvalidArgument("grid.n must be a power of two >= 64");
      if (!(L[a] > 0.0)) throw InvalidArgument("grid.L must be > 0");
    }
  }

  double dx(int axis) const { return 2.0 * L[axis] / n[axis]; }
  std::size_t size() const { return dims == 1 ? n[0] : static_cast<std::size_t>(n[0]) * n[1]; }
  double cell_volume() const { return dims == 1 ? dx(0) : dx(0) * dx(1); }

  std::vector<double> coordinates(int axis) const {
    std::vector<double> x(n[axis]);
    for (int j = 0; j < n[axis]; ++j) x[j] = -L[axis] + j * dx(axis);
    return x;
  }

  // Angular wavenumbers in FFT order (0, 1, ..., n/2-1, -n/2, ..., -1) * 2pi/(2L).
  std::vector<double> wavenumbers(int axis) const {
    std::vector<double> k(n[axis]);
    const double dk = pi / L[axis];
    for (int j = 0; j < n[axis]; ++j) k[j] = dk * (j < n[axis] / 2 ? j : j - n[axis]);
    return k;
  }

  std::vector<int> shape() const { return dims == 1 ? std::vector<int>{n[0]} : std::vector<int>{n[0], n[1]}; }
};

// sum conj(a) b dV
inline complex grid_inner(const GridSpec& g, std::span<const complex> a, std::span<const complex> b) {
  complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * g.cell_volume();
}

inline double grid_norm2(const GridSpec& g, std::span<const complex> a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s * g.cell_volume();
}

// Field-free H0 = p^2/(2m) + V on the grid, kinetic part applied spectrally.
class GridHamiltonian {
 public:
  GridHamiltonian(const GridSpec& grid, const Potential& pot, const PhysicalConstants& k = {})
      : grid_(grid), work_(grid.size()) {
    grid.validate();
    k.validate();
    const auto shape = grid.shape();
    plan_ = std::make_unique<FftPlan>(shape, work_.data());
    potential_.resize(grid.size());
    kinetic_.resize(grid.size());
    const double scale = k.hbar * k.hbar / (2.0 * k.m);
    const auto x0 = grid.coordinates(0), k0 = grid.wavenumbers(0);
    if (grid.dims == 1) {
      for (int i = 0; i < grid.n[0]; ++i) {
        potential_[i] = pot.value_r2(x0[i] * x0[i]);
        kinetic_[i] = scale * k0[i] * k0[i];
      }
    } else {
      const auto x1 = grid.coordinates(1), k1 = grid.wavenumbers(1);
      for (int i = 0; i < grid.n[0]; ++i) {
        for (int j = 0; j < grid.n[1]; ++j) {
          const std::size_t idx = static_cast<std::size_t>(i) * grid.n[1] + j;
          potential_[idx] = pot.value_r2(x0[i] * x0[i] + x1[j] * x1[j]);
          kinetic_[idx] = scale * (k0[i] * k0[i] + k1[j] * k1[j]);
        }
      }
    }
  }

  const GridSpec& grid() const { return grid_; }
  std::span<const double> potential() const { return potential_; }
  std::span<const double> kinetic() const { return kinetic_; }
  const FftPlan& plan() const { return *plan_; }

  // out = H0 in. Not re-entrant (uses an internal work buffer).
  void apply(std::span<const complex> in, std::span<complex> out) {
    std::copy(in.begin(), in.end(), work_.begin());
    plan_->forward(work_.data());
    const double inv_n = 1.0 / static_cast<double>(work_.size());
    for (std::size_t i = 0; i < work_.size(); ++i) work_[i] *= kinetic_[i] * inv_n;
    plan_->backward(work_.data());
    for (std::size_t i = 0; i < work_.size(); ++i) out[i] = work_[i] + potential_[i] * in[i];
  }

  // Rigorous bounds on the spectrum: [min V, max T + max V].
  double spectrum_lower_bound() const { return *std::min_element(potential_.begin(), potential_.end()); }
  double spectrum_upper_bound() const {
    return *std::max_element(kinetic_.begin(), kinetic_.end()) +
           *std::max_element(potential_.begin(), potential_.end());
  }

 private:
  GridSpec grid_;
  std::vector<complex> work_;
  std::unique_ptr<FftPlan> plan_;
  std::vector<double> potential_;
  std::vector<double> kinetic_;
};

}  // namespace semirel

#endif  // SEMIREL_GRID_HPP
