#include <semirel/free_electron.hpp>
#include <semirel/trajectory.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace semirel;

namespace {

PulseParams make_pulse(double E0, double omega, int n) {
  PulseParams p;
  p.E0 = E0;
  p.omega = omega;
  p.n_cycles = n;
  return p;
}

// Plane-wave solution for an electron starting at rest: the kinetic momentum
// at the electron's own phase.
Vec3 analytic_kinetic_momentum(const ClassicalState& s, const PulseParams& p, const PhysicalConstants& k) {
  const double A = vector_potential(phase(s.t, s.r, p, k), p);
  return (k.e * A) * p.pol + (k.e * k.e * A * A / (2 * k.m * k.c)) * p.prop;
}

IntegrateOptions uniform_samples(double t_end, int n) {
  IntegrateOptions io;
  for (int i = 1; i <= n; ++i) io.sample_times.push_back(t_end * i / n);
  return io;
}

}  // namespace

TEST(Integrate, FieldFreeStraightLine) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(0.0, 1.0, 2);
  const ClassicalState s0{{1.0, -2.0, 0.5}, {0.3, 0.7, -1.1}, 0.0};
  const double t_end = 50.0;
  for (auto v : all_hamiltonian_variants) {
    const Trajectory tr = integrate(s0, v, Potential::none(), p, k, t_end, 1e-12);
    ASSERT_TRUE(tr.ok());
    const Vec3 vel = equations_of_motion(s0, v, Potential::none(), p, k).dr;
    const Vec3 expected = s0.r + t_end * vel;
    EXPECT_LT(norm(tr.final_state().r - expected) / norm(expected), 1e-10) << to_string(v);
    EXPECT_EQ(tr.final_state().t, t_end);
  }
}

TEST(Integrate, SamplesStrictlyIncreasing) {
  const PhysicalConstants k;
  const Trajectory tr = integrate(ClassicalState{{1, 0, 0}, {0, 1, 0}, 0.0}, HamiltonianVariant::semirel,
                                  Potential::coulomb(1.0), make_pulse(0.05, 0.3, 2), k, 40.0, 1e-9);
  ASSERT_TRUE(tr.ok());
  for (std::size_t i = 1; i < tr.samples.size(); ++i) EXPECT_GT(tr.samples[i].t, tr.samples[i - 1].t);
}

TEST(Integrate, KeplerEnergyConservedOverTenOrbits) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(0.0, 1.0, 1);
  const ClassicalState s0{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, 0.0};
  for (auto v : all_hamiltonian_variants) {
    IntegrateOptions io;
    io.mode = SampleMode::endpoints;
    const Trajectory tr = integrate(s0, v, Potential::coulomb(1.0), p, k, 10 * 2 * pi, 1e-11, io);
    ASSERT_TRUE(tr.ok());
    const double E_start = hamiltonian_value(s0, v, Potential::coulomb(1.0), p, k);
    if (!is_relativistic(v)) EXPECT_EQ(E_start, -0.5);
    EXPECT_LT(std::fabs(tr.diagnostics.final_energy - E_start), 1e-8) << to_string(v);
  }
}

TEST(Integrate, EnergyConservedAfterPulse) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(0.05, 0.5, 2);
  const double tol = 1e-10;
  const double t_pulse = pulse_duration(p) + 1.0;  // field gone everywhere near the orbit
  const double t_end = t_pulse + 60.0;
  for (auto v : all_hamiltonian_variants) {
    const Trajectory tr = integrate(ClassicalState{{1, 0, 0}, {0, 1, 0}, 0.0}, v, Potential::coulomb(1.0), p, k,
                                    t_end, tol);
    ASSERT_TRUE(tr.ok());
    double H0 = std::nan("");
    for (const auto& s : tr.samples) {
      if (s.t < t_pulse) continue;
      const double H = hamiltonian_value(s, v, Potential::coulomb(1.0), p, k);
      if (std::isnan(H0)) H0 = H;
      EXPECT_LE(std::fabs(H - H0), 10 * tol * (t_end - t_pulse)) << to_string(v);
    }
  }
}

TEST(Integrate, GaugeEquivalenceAgainstPlaneWaveSolution) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(0.5 * 3.5 * k.c, 3.5, 4);  // quiver 0.5
  const double t_end = free_electron_end_time(p, k);
  const IntegrateOptions io = uniform_samples(t_end, 100);
  const Trajectory minimal =
      integrate(ClassicalState{}, HamiltonianVariant::rel_minimal, Potential::none(), p, k, t_end, 1e-12, io);
  const Trajectory prop =
      integrate(ClassicalState{}, HamiltonianVariant::rel_propgauge, Potential::none(), p, k, t_end, 1e-12, io);
  ASSERT_EQ(minimal.samples.size(), prop.samples.size());
  const double scale = k.e * p.E0 / p.omega;
  for (std::size_t i = 0; i < minimal.samples.size(); ++i) {
    const auto& a = minimal.samples[i];
    const auto& b = prop.samples[i];
    const Vec3 da = kinetic_momentum_of(HamiltonianVariant::rel_minimal, a.p,
                                        vector_potential(phase(a.t, a.r, p, k), p), p, k);
    const Vec3 db = kinetic_momentum_of(HamiltonianVariant::rel_propgauge, b.p,
                                        vector_potential(phase(b.t, b.r, p, k), p), p, k);
    EXPECT_LT(norm(da - db) / scale, 1e-8);
    EXPECT_LT(norm(da - analytic_kinetic_momentum(a, p, k)) / scale, 1e-8);
    EXPECT_LT(norm(a.r - b.r) / (1.0 + norm(b.r)), 1e-8);
  }
}

TEST(Integrate, PropagationGaugeCanonicalMomentumStaysZero) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(300.0, 3.5, 3);
  const double t_end = free_electron_end_time(p, k);
  for (auto v : {HamiltonianVariant::rel_propgauge, HamiltonianVariant::nonrel_propgauge,
                 HamiltonianVariant::semirel}) {
    const Trajectory tr = integrate(ClassicalState{}, v, Potential::none(), p, k, t_end, 1e-12);
    ASSERT_TRUE(tr.ok());
    double pmax = 0.0;
    for (const auto& s : tr.samples) pmax = std::max(pmax, norm(s.p));
    EXPECT_LT(pmax, 1e-9 * p.E0 / p.omega) << to_string(v);
  }
}

TEST(Integrate, VariantsConvergeInTheWeakFieldLimit) {
  const PhysicalConstants k;
  double previous = 1.0;
  for (double E0 : {10.0, 1.0, 0.1}) {
    const auto res = free_electron_comparison(make_pulse(E0, 1.0, 2), k,
                                              {all_hamiltonian_variants.begin(), all_hamiltonian_variants.end()});
    double worst = 0.0;
    for (const auto& a : res)
      for (const auto& b : res) worst = std::max(worst, max_relative_deviation(a.trajectory, b.trajectory));
    EXPECT_LT(worst, previous);
    previous = worst;
  }
  EXPECT_LT(previous, 1e-5);
}

TEST(Integrate, CoulombCollisionFlagged) {
  const PhysicalConstants k;
  const Trajectory tr = integrate(ClassicalState{{0.5, 0, 0}, {}, 0.0}, HamiltonianVariant::semirel,
                                  Potential::coulomb(1.0), make_pulse(0.0, 1.0, 1), k, 10.0, 1e-10);
  EXPECT_EQ(tr.status, TrajectoryStatus::close_encounter);
  EXPECT_FALSE(tr.samples.empty());
  EXPECT_LT(tr.final_state().t, 10.0);
}

TEST(Integrate, RejectsBadArguments) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(1.0, 1.0, 1);
  EXPECT_THROW(integrate(ClassicalState{}, HamiltonianVariant::semirel, Potential::none(), p, k, 0.0, 1e-9),
               InvalidArgument);
  EXPECT_THROW(integrate(ClassicalState{}, HamiltonianVariant::semirel, Potential::none(), p, k, 1.0, 0.0),
               InvalidArgument);
}

TEST(FreeElectron, PropagationGaugeEndsAtRest) {
  const PhysicalConstants k;
  for (double omega : {0.057, 3.5, 50.0}) {
    const PulseParams p = make_pulse(0.5 * omega * k.c, omega, 3);
    const auto res = free_electron_comparison(p, k, {HamiltonianVariant::rel_propgauge});
    EXPECT_LT(norm(res[0].final_kinetic_momentum), 1e-9 * p.E0 / p.omega) << omega;
  }
}

TEST(FreeElectron, LongitudinalMomentumMidPulse) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(100.0, 3.5, 15);
  const auto res = free_electron_comparison(p, k, {HamiltonianVariant::rel_minimal,
                                                   HamiltonianVariant::rel_propgauge});
  for (const auto& r : res) {
    for (const auto& s : r.trajectory.samples) {
      const double A = vector_potential(phase(s.t, s.r, p, k), p);
      const Vec3 d = kinetic_momentum_of(r.variant, s.p, A, p, k);
      const double expected = k.e * k.e * A * A / (2 * k.m * k.c);
      EXPECT_LT(std::fabs(d[2] - expected), 1e-8 * (p.E0 / p.omega) * (p.E0 / p.omega) / (2 * k.c));
    }
  }
}

TEST(FreeElectron, SemirelTracksRelativisticFarBetterThanNonrel) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(100.0, 3.5, 15);
  const auto res = free_electron_comparison(
      p, k, {HamiltonianVariant::rel_propgauge, HamiltonianVariant::semirel, HamiltonianVariant::nonrel_propgauge});
  const double semi = max_relative_deviation(res[1].trajectory, res[0].trajectory);
  const double nonrel = max_relative_deviation(res[2].trajectory, res[0].trajectory);
  EXPECT_LT(10 * semi, nonrel);
}

TEST(FreeElectron, SweepTable) {
  const PhysicalConstants k;
  PulseParams base = make_pulse(0.0, 1.0, 2);
  const auto rows = free_sweep(base, {1.0, 3.5}, {0.1, 0.5}, {HamiltonianVariant::semirel}, k);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NEAR(rows[3].E0, 0.5 * 3.5 * k.c, 1e-9);
  std::ostringstream os;
  write_free_sweep_table(os, rows);
  EXPECT_TRUE(os.str().starts_with("omega\tquiver\tE0\tvariant\t"));
}

TEST(Trajectory, ExportHasHeaderAndColumns) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(1.0, 1.0, 1);
  const Trajectory tr = integrate(ClassicalState{}, HamiltonianVariant::semirel, Potential::none(), p, k, 1.0, 1e-9);
  std::ostringstream os;
  write_trajectory(os, tr, Potential::none(), p, k);
  std::istringstream is(os.str());
  std::string line;
  int comments = 0, rows = 0;
  while (std::getline(is, line)) {
    if (line.starts_with("#")) {
      ++comments;
    } else if (line.starts_with("t\t")) {
      EXPECT_EQ(line, "t\tx\ty\tz\tpx\tpy\tpz\tdx\tdy\tdz\tH");
    } else {
      ++rows;
      EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 10);
    }
  }
  EXPECT_GE(comments, 1);
  EXPECT_EQ(rows, static_cast<int>(tr.samples.size()));
}

TEST(Integrate, LongWavelengthKeepsCanonicalMomentumExactlyZero) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(300.0, 3.5, 3);
  IntegrateOptions io;
  io.field_model = FieldModel::long_wavelength;
  for (auto v : {HamiltonianVariant::rel_propgauge, HamiltonianVariant::nonrel_propgauge,
                 HamiltonianVariant::semirel}) {
    const Trajectory tr = integrate(ClassicalState{}, v, Potential::none(), p, k, pulse_duration(p), 1e-10, io);
    for (const auto& s : tr.samples) EXPECT_EQ(s.p, Vec3{}) << to_string(v);
  }
}
