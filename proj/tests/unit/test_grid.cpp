#include <semirel/eigensolver.hpp>
#include <semirel/tdse.hpp>
#include <semirel/tdse_sweep.hpp>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <random>

using namespace semirel;

namespace {

// Dense H0 on a periodic 1D grid: exact Fourier-interpolation kinetic matrix
// T_jl = (1/N) sum_k (k^2/2) cos(k (x_j - x_l)) plus diag(V).
Eigen::MatrixXd dense_hamiltonian_1d(const GridSpec& g, const Potential& pot) {
  const int n = g.n[0];
  const auto x = g.coordinates(0);
  const auto kk = g.wavenumbers(0);
  Eigen::MatrixXd H(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += 0.5 * kk[q] * kk[q] * std::cos(kk[q] * (x[j] - x[l]));
      H(j, l) = s / n;
    }
    H(j, j) += pot.value_r2(x[j] * x[j]);
  }
  return H;
}

std::vector<complex> random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<complex> v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST(GridSpec, GeometryAndValidation) {
  const GridSpec g = GridSpec::one_d(128, 32.0);
  EXPECT_DOUBLE_EQ(g.dx(0), 0.5);
  EXPECT_EQ(g.coordinates(0).front(), -32.0);
  EXPECT_DOUBLE_EQ(g.coordinates(0).back(), 31.5);
  const auto k = g.wavenumbers(0);
  EXPECT_EQ(k[0], 0.0);
  EXPECT_DOUBLE_EQ(k[1], pi / 32.0);
  EXPECT_DOUBLE_EQ(k[64], -64 * pi / 32.0);
  EXPECT_EQ(GridSpec::two_d(64, 10.0).size(), 4096u);
  EXPECT_THROW(GridSpec::one_d(100, 10.0).validate(), InvalidArgument);
  EXPECT_THROW(GridSpec::one_d(32, 10.0).validate(), InvalidArgument);
  EXPECT_THROW(GridSpec::one_d(64, -1.0).validate(), InvalidArgument);
}

TEST(Fft, MatchesNaiveDftAndRoundTrips) {
  const int n = 64;
  auto data = random_state(n, 1);
  const auto orig = data;
  std::vector<complex> buf(n);
  FftPlan plan(std::vector<int>{n}, buf.data());
  plan.forward(data.data());
  for (int q = 0; q < n; ++q) {
    complex s = 0.0;
    for (int j = 0; j < n; ++j) s += orig[j] * std::polar(1.0, -2 * pi * q * j / n);
    EXPECT_LT(std::abs(s - data[q]), 1e-12);
  }
  plan.backward(data.data());
  for (int j = 0; j < n; ++j) EXPECT_LT(std::abs(data[j] / double(n) - orig[j]), 1e-14);

  auto d2 = random_state(64 * 64, 2);
  const auto o2 = d2;
  std::vector<complex> b2(64 * 64);
  FftPlan plan2(std::vector<int>{64, 64}, b2.data());
  plan2.forward(d2.data());
  plan2.backward(d2.data());
  for (std::size_t i = 0; i < d2.size(); ++i) EXPECT_LT(std::abs(d2[i] / 4096.0 - o2[i]), 1e-13);
}

TEST(GridHamiltonian, ApplyMatchesDenseMatrix) {
  const GridSpec g = GridSpec::one_d(64, 12.0);
  const Potential pot = Potential::softcore(1.0, std::sqrt(2.0));
  GridHamiltonian H(g, pot);
  const Eigen::MatrixXd D = dense_hamiltonian_1d(g, pot);
  const auto in = random_state(64, 3);
  std::vector<complex> out(64);
  H.apply(in, out);
  for (int j = 0; j < 64; ++j) {
    complex s = 0.0;
    for (int l = 0; l < 64; ++l) s += D(j, l) * in[l];
    EXPECT_LT(std::abs(s - out[j]), 1e-11);
  }
}

TEST(GroundState, SoftCore1DReferenceCase) {
  const GridSpec g = GridSpec::one_d(2048, 100.0);
  const GroundState gs = ground_state(g, Potential::softcore(1.0, std::sqrt(2.0)));
  EXPECT_LT(std::fabs(gs.energy + 0.5), 5e-3);
  EXPECT_LT(gs.residual, 1e-8);
  EXPECT_NEAR(grid_norm2(g, gs.psi.psi), 1.0, 1e-12);
}

TEST(GroundState, MatchesDenseDiagonalization) {
  const GridSpec g = GridSpec::one_d(128, 25.0);
  const Potential pot = Potential::softcore(1.0, std::sqrt(2.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian_1d(g, pot));
  const GroundState gs = ground_state(g, pot);
  EXPECT_NEAR(gs.energy, es.eigenvalues()[0], 1e-10);
  // numpy FFT-matrix diagonalization of the same grid.
  EXPECT_NEAR(es.eigenvalues()[0], -0.5000000001351323, 1e-10);

  const BoundBasis basis = bound_basis(g, pot);
  int dense_bound = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) dense_bound += es.eigenvalues()[i] < 0.0;
  ASSERT_EQ(basis.n_bound(), dense_bound);
  for (int i = 0; i < basis.n_bound(); ++i) EXPECT_NEAR(basis.energies[i], es.eigenvalues()[i], 1e-9);
}

TEST(GroundState, SpectrallyConvergedUnderGridDoubling) {
  const Potential pot = Potential::softcore(1.0, std::sqrt(2.0));
  const double e1 = ground_state(GridSpec::one_d(1024, 100.0), pot).energy;
  const double e2 = ground_state(GridSpec::one_d(2048, 100.0), pot).energy;
  EXPECT_LT(std::fabs(e1 - e2), 1e-6);
}

TEST(GroundState, EvenParity) {
  const GridSpec g = GridSpec::one_d(1024, 60.0);
  const GroundState gs = ground_state(g, Potential::softcore(1.0, std::sqrt(2.0)));
  // x_j -> -x_j maps index j to n - j (index 0 is x = -L, its own image).
  const int n = g.n[0];
  double odd = 0.0;
  for (int j = 1; j < n; ++j) odd += std::norm(0.5 * (gs.psi.psi[j] - gs.psi.psi[n - j]));
  EXPECT_LT(std::sqrt(odd * g.cell_volume()), 1e-10);
}

TEST(GroundState, RequiresSoftCore) {
  EXPECT_THROW(ground_state(GridSpec::one_d(64, 10.0), Potential::coulomb(1.0)), InvalidArgument);
  EXPECT_THROW(ground_state(GridSpec::one_d(64, 10.0), Potential::none()), InvalidArgument);
}

TEST(BoundBasis, Orthonormal2D) {
  const GridSpec g = GridSpec::two_d(64, 12.0);
  const BoundBasis b = bound_basis(g, Potential::softcore(1.0, 0.8));
  ASSERT_GT(b.n_bound(), 3);
  const Eigen::MatrixXd G = b.states.transpose() * b.states * g.cell_volume();
  EXPECT_LT((G - Eigen::MatrixXd::Identity(b.n_bound(), b.n_bound())).cwiseAbs().maxCoeff(), 1e-10);
  for (double e : b.energies) EXPECT_LT(e, 0.0);
  for (int i = 1; i < b.n_bound(); ++i) EXPECT_LE(b.energies[i - 1], b.energies[i]);
}

TEST(Softening, CalibratedTo2DHydrogenBinding) {
  const GridSpec g = GridSpec::two_d(64, 16.0);
  const SofteningResult s = calibrate_softening(g, 1.0);
  EXPECT_LT(std::fabs(s.energy + 0.5), 1e-3);
  EXPECT_NEAR(ground_state(g, Potential::softcore(1.0, s.a)).energy, s.energy, 1e-12);
  const SofteningResult s1 = calibrate_softening(GridSpec::one_d(1024, 100.0), 1.0);
  EXPECT_DOUBLE_EQ(s1.a * s1.a, 2.0);
}
