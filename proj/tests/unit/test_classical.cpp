#include <semirel/classical.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace semirel;
using mp = boost::multiprecision::cpp_bin_float_50;

namespace {

PulseParams make_pulse(double E0, double omega, int n) {
  PulseParams p;
  p.E0 = E0;
  p.omega = omega;
  p.n_cycles = n;
  return p;
}

// Central differences of hamiltonian_value, step h.
PhaseVelocity finite_difference(const ClassicalState& s, HamiltonianVariant v, const Potential& pot,
                                const PulseParams& pulse, const PhysicalConstants& k, double h) {
  PhaseVelocity out;
  for (int i = 0; i < 3; ++i) {
    ClassicalState a = s, b = s;
    a.p[i] += h;
    b.p[i] -= h;
    out.dr[i] = (hamiltonian_value(a, v, pot, pulse, k) - hamiltonian_value(b, v, pot, pulse, k)) / (2 * h);
    a = s;
    b = s;
    a.r[i] += h;
    b.r[i] -= h;
    out.dp[i] = -(hamiltonian_value(a, v, pot, pulse, k) - hamiltonian_value(b, v, pot, pulse, k)) / (2 * h);
  }
  return out;
}

}  // namespace

TEST(Hamiltonian, RestFrameIsZero) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(0.0, 1.0, 2);
  for (auto v : all_hamiltonian_variants)
    EXPECT_EQ(hamiltonian_value(ClassicalState{}, v, Potential::none(), p, k), 0.0) << to_string(v);
}

TEST(Hamiltonian, FieldFreeNewtonianVariantsExact) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(0.0, 1.0, 2);
  const Potential pot = Potential::coulomb(1.0);
  const ClassicalState s{{0.3, -1.1, 0.7}, {0.4, 0.9, -2.0}, 0.5};
  const double newton = norm2(s.p) / 2.0 - 1.0 / norm(s.r);
  EXPECT_EQ(hamiltonian_value(s, HamiltonianVariant::semirel, pot, p, k), newton);
  EXPECT_EQ(hamiltonian_value(s, HamiltonianVariant::nonrel_propgauge, pot, p, k), newton);
}

TEST(Hamiltonian, FieldFreeRelativisticMatchesExtendedPrecision) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(0.0, 1.0, 2);
  const ClassicalState s{{}, {0.0, 0.0, 10.0}, 0.0};
  const mp c = mp("137.035999084");
  const mp ref = sqrt(c * c * c * c + 100 * c * c) - c * c;
  for (auto v : {HamiltonianVariant::rel_minimal, HamiltonianVariant::rel_propgauge}) {
    const double H = hamiltonian_value(s, v, Potential::none(), p, k);
    EXPECT_NEAR(H, static_cast<double>(ref), 1e-9 * static_cast<double>(ref));
  }
  EXPECT_NEAR(static_cast<double>(ref), 49.933612450847716, 1e-9);  // mpmath
}

TEST(Hamiltonian, CoulombSingularitySignalled) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(1.0, 1.0, 2);
  const ClassicalState s{{1e-9, 0.0, 0.0}, {}, 0.0};
  EXPECT_THROW(hamiltonian_value(s, HamiltonianVariant::semirel, Potential::coulomb(1.0), p, k), SingularityError);
}

TEST(EquationsOfMotion, FreeParticle) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(0.0, 1.0, 2);
  const ClassicalState s{{1, 2, 3}, {3.0, -4.0, 12.0}, 0.0};
  for (auto v : all_hamiltonian_variants) {
    const PhaseVelocity f = equations_of_motion(s, v, Potential::none(), p, k);
    const double gamma = is_relativistic(v) ? std::sqrt(1.0 + norm2(s.p) / (k.c * k.c)) : 1.0;
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(f.dr[i], s.p[i] / gamma, 1e-15);
      EXPECT_EQ(f.dp[i], 0.0);
    }
  }
}

class GradientConsistency : public ::testing::TestWithParam<HamiltonianVariant> {};

TEST_P(GradientConsistency, MatchesFiniteDifferences) {
  const HamiltonianVariant v = GetParam();
  std::mt19937_64 rng(static_cast<std::uint64_t>(v) + 100);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // A weakly and a strongly relativistic setting (c = 5 makes the spatial
  // field dependence through eta a leading effect).
  struct Setting {
    PhysicalConstants k;
    PulseParams pulse;
    Potential pot;
  };
  PhysicalConstants slow;
  slow.c = 5.0;
  const std::vector<Setting> settings{
      {PhysicalConstants{}, make_pulse(20.0, 3.5, 3), Potential::coulomb(1.0)},
      {slow, make_pulse(10.0, 2.0, 2), Potential::softcore(1.0, 0.7)},
  };
  int checked = 0;
  for (const auto& st : settings) {
    for (int i = 0; i < 500; ++i) {
      ClassicalState s;
      const double rr = 0.5 + 4.5 * u(rng);
      const Vec3 dir{g(rng), g(rng), g(rng)};
      s.r = (rr / norm(dir)) * dir;
      s.p = Vec3{2 * g(rng), 2 * g(rng), 2 * g(rng)};
      s.t = pulse_duration(st.pulse) * u(rng);
      const PhaseVelocity a = equations_of_motion(s, v, st.pot, st.pulse, st.k);
      const PhaseVelocity f = finite_difference(s, v, st.pot, st.pulse, st.k, 1e-6);
      EXPECT_LT(norm(a.dr - f.dr) / norm(a.dr), 1e-6);
      EXPECT_LT(norm(a.dp - f.dp) / norm(a.dp), 1e-6);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 1000);
}

namespace semirel {
inline void PrintTo(HamiltonianVariant v, std::ostream* os) { *os << to_string(v); }
}  // namespace semirel

INSTANTIATE_TEST_SUITE_P(AllVariants, GradientConsistency, ::testing::ValuesIn(all_hamiltonian_variants),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(EquationsOfMotion, PropagationGaugeKeepsZeroCanonicalMomentum) {
  const PhysicalConstants k;
  const PulseParams p = make_pulse(500.0, 3.5, 4);
  for (int i = 0; i <= 200; ++i) {
    const ClassicalState s{{0.1 * i, -0.2, 0.05 * i}, {}, pulse_duration(p) * i / 200.0};
    const PhaseVelocity f = equations_of_motion(s, HamiltonianVariant::rel_propgauge, Potential::none(), p, k);
    const double A = vector_potential(phase(s.t, s.r, p, k), p);
    EXPECT_LT(norm(f.dp), 1e-13 * (1.0 + A * A));
  }
}

TEST(Variants, NamesRoundTrip) {
  for (auto v : all_hamiltonian_variants) EXPECT_EQ(parse_hamiltonian_variant(to_string(v)), v);
  EXPECT_FALSE(parse_hamiltonian_variant("DIRAC").has_value());
  EXPECT_EQ(parse_hamiltonian_variant("SEMIREL"), HamiltonianVariant::semirel);
}
