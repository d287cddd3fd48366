#ifndef SEMIREL_EIGENSOLVER_HPP
#define SEMIREL_EIGENSOLVER_HPP

// Chebyshev-filtered subspace iteration for the low end of the spectrum of
// the (real symmetric) field-free grid Hamiltonian. Two real columns are
// packed into one complex vector per operator application.

#include "grid.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace semirel {

struct EigenOptions {
  double residual_tol = 1e-10;  // on unit-norm vectors (grid-normalization invariant)
  int degree = 80;              // Chebyshev filter degree per iteration
  int max_iterations = 400;
  int guard = 8;                // extra block columns beyond the wanted ones
  std::uint64_t seed = 0x5EED;
};

struct EigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns have unit Euclidean norm
  Eigen::VectorXd residuals;
  int iterations = 0;
};

namespace detail {

inline void apply_block(GridHamiltonian& H, const Eigen::MatrixXd& X, Eigen::MatrixXd& HX) {
  const Eigen::Index n = X.rows(), k = X.cols();
  HX.resize(n, k);
  std::vector<complex> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < k; j += 2) {
    const bool pair = j + 1 < k;
    for (Eigen::Index i = 0; i < n; ++i) in[i] = complex(X(i, j), pair ? X(i, j + 1) : 0.0);
    H.apply(in, out);
    for (Eigen::Index i = 0; i < n; ++i) {
      HX(i, j) = out[i].real();
      if (pair) HX(i, j + 1) = out[i].imag();
    }
  }
}

inline void orthonormalize(Eigen::MatrixXd& X) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  X = qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), X.cols());
}

// Scaled Chebyshev filter damping [lo, hi] relative to the region below lo.
inline void chebyshev_filter(GridHamiltonian& H, Eigen::MatrixXd& X, int degree, double lo, double hi,
                             double lowest) {
  const double e = 0.5 * (hi - lo);
  const double c = 0.5 * (hi + lo);
  double sigma = e / (lowest - c);
  const double tau = 2.0 / sigma;
  Eigen::MatrixXd Y, Ynew;
  apply_block(H, X, Y);
  Y = (Y - c * X) * (sigma / e);
  for (int i = 2; i <= degree; ++i) {
    const double sigma_new = 1.0 / (tau - sigma);
    apply_block(H, Y, Ynew);
    Ynew = (Ynew - c * Y) * (2.0 * sigma_new / e) - (sigma * sigma_new) * X;
    X.swap(Y);
    Y.swap(Ynew);
    sigma = sigma_new;
  }
  X.swap(Y);
}

inline void rayleigh_ritz(GridHamiltonian& H, Eigen::MatrixXd& X, EigenResult& out) {
  Eigen::MatrixXd HX;
  apply_block(H, X, HX);
  Eigen::MatrixXd G = X.transpose() * HX;
  G = 0.5 * (G + G.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  X = X * es.eigenvectors();
  HX = HX * es.eigenvectors();
  out.values = es.eigenvalues();
  out.residuals.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) out.residuals[j] = (HX.col(j) - out.values[j] * X.col(j)).norm();
}

inline Eigen::MatrixXd random_block(Eigen::Index n, Eigen::Index k, std::uint64_t seed, Eigen::Index offset = 0) {
  Eigen::MatrixXd X(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(j + offset));
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = rng.uniform() - 0.5;
  }
  return X;
}

// Leading Ritz vectors that have converged and are no longer filtered.
inline Eigen::Index locked_count(const EigenResult& r, Eigen::Index limit, double tol) {
  Eigen::Index m = 0;
  while (m < limit && r.residuals[m] < tol) ++m;
  return m;
}

inline void filter_active(GridHamiltonian& H, Eigen::MatrixXd& X, Eigen::Index locked, int degree, double lo,
                          double hi, double lowest) {
  Eigen::MatrixXd active = X.rightCols(X.cols() - locked);
  chebyshev_filter(H, active, degree, lo, hi, lowest);
  X.rightCols(X.cols() - locked) = active;
}

}  // namespace detail

// Lowest `count` eigenpairs.
inline EigenResult lowest_eigenpairs(GridHamiltonian& H, int count, const EigenOptions& opt = {}) {
  const Eigen::Index n = static_cast<Eigen::Index>(H.grid().size());
  const Eigen::Index k = std::min<Eigen::Index>(n, count + opt.guard);
  Eigen::MatrixXd X = detail::random_block(n, k, opt.seed);
  detail::orthonormalize(X);
  EigenResult r;
  detail::rayleigh_ritz(H, X, r);
  const double hi = H.spectrum_upper_bound();
  for (r.iterations = 1; r.iterations <= opt.max_iterations; ++r.iterations) {
    const Eigen::Index locked = detail::locked_count(r, count, opt.residual_tol);
    detail::filter_active(H, X, locked, opt.degree, r.values[k - 1], hi, r.values[0]);
    detail::orthonormalize(X);
    detail::rayleigh_ritz(H, X, r);
    if (r.residuals.head(count).maxCoeff() < opt.residual_tol) {
      r.values.conservativeResize(count);
      r.residuals.conservativeResize(count);
      r.vectors = X.leftCols(count);
      return r;
    }
  }
  throw NumericalError("eigensolver: lowest eigenpairs did not converge");
}

// Every eigenpair with eigenvalue below `cut`. The block grows until at least
// `guard` Ritz values sit above the cut.
inline EigenResult eigenpairs_below(GridHamiltonian& H, double cut, int expected_count, const EigenOptions& opt = {}) {
  const Eigen::Index n = static_cast<Eigen::Index>(H.grid().size());
  Eigen::Index k = std::min<Eigen::Index>(n, std::max(expected_count, 1) + opt.guard);
  Eigen::MatrixXd X = detail::random_block(n, k, opt.seed);
  detail::orthonormalize(X);
  EigenResult r;
  detail::rayleigh_ritz(H, X, r);
  const double hi = H.spectrum_upper_bound();
  const double guard_tol = std::max(opt.residual_tol, 1e-6);
  for (r.iterations = 1; r.iterations <= opt.max_iterations; ++r.iterations) {
    Eigen::Index locked = 0;
    while (locked < k && r.values[locked] < cut && r.residuals[locked] < opt.residual_tol) ++locked;
    detail::filter_active(H, X, locked, opt.degree, r.values[k - 1], hi, r.values[0]);
    detail::orthonormalize(X);
    detail::rayleigh_ritz(H, X, r);
    Eigen::Index below = 0;
    while (below < k && r.values[below] < cut) ++below;
    if (k - below < opt.guard && k < n) {
      const Eigen::Index extra = std::min<Eigen::Index>(n - k, std::max<Eigen::Index>(opt.guard, k / 2));
      Eigen::MatrixXd grown(n, k + extra);
      grown << X, detail::random_block(n, extra, opt.seed ^ 0xABCDULL, k);
      X.swap(grown);
      k += extra;
      detail::orthonormalize(X);
      detail::rayleigh_ritz(H, X, r);
      continue;
    }
    bool done = true;
    for (Eigen::Index j = 0; j < below && done; ++j) done = r.residuals[j] < opt.residual_tol;
    // The first Ritz value above the cut must be resolved well enough that no
    // eigenvalue below the cut can hide behind it.
    if (done && below < k) done = r.residuals[below] < guard_tol && r.values[below] - r.residuals[below] >= cut;
    if (done) {
      r.values.conservativeResize(below);
      r.residuals.conservativeResize(below);
      r.vectors = X.leftCols(below);
      return r;
    }
  }
  throw NumericalError("eigensolver: bound-state subspace did not converge");
}

}  // namespace semirel

#endif  // SEMIREL_EIGENSOLVER_HPP
