#ifndef SEMIREL_CTMC_HPP
#define SEMIREL_CTMC_HPP

// Classical trajectory Monte Carlo for a hydrogen-like ground state.

#include "parallel.hpp"
#include "rng.hpp"
#include "trajectory.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

namespace semirel {

struct EnsembleSpec {
  long n_traj = 1000;
  std::uint64_t seed = 1;
  double binding_energy = -0.5;
  double Z = 1.0;

  void validate() const {
    if (n_traj < 1) throw InvalidArgument("ensemble.n_traj must be >= 1");
    if (!(binding_energy < 0.0)) throw InvalidArgument("ensemble.binding_energy must be < 0");
    if (!(Z > 0.0)) throw InvalidArgument("ensemble.Z must be > 0");
  }
};

namespace detail {

// Eccentric anomaly from mean anomaly, Newton iteration safeguarded by
// bisection on [0, 2 pi].
inline double solve_kepler(double mean_anomaly, double ecc) {
  double lo = 0.0, hi = 2.0 * pi;
  double u = ecc > 0.8 ? pi : mean_anomaly;
  for (int it = 0; it < 100; ++it) {
    const double f = u - ecc * std::sin(u) - mean_anomaly;
    if (f > 0.0) hi = u; else lo = u;
    const double fp = 1.0 - ecc * std::cos(u);
    double next = u - f / fp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - u) < 1e-15) return next;
    u = next;
  }
  return u;
}

// Rows of a uniformly random rotation (Shoemake's unit quaternion method).
inline std::array<Vec3, 3> random_rotation(SplitMix64& rng) {
  const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
  const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
  const double w = s1 * std::sin(2.0 * pi * u2), x = s1 * std::cos(2.0 * pi * u2);
  const double y = s2 * std::sin(2.0 * pi * u3), z = s2 * std::cos(2.0 * pi * u3);
  return {Vec3{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
          Vec3{2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
          Vec3{2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
}

inline Vec3 rotate(const std::array<Vec3, 3>& rows, const Vec3& v) {
  return {dot(rows[0], v), dot(rows[1], v), dot(rows[2], v)};
}

}  // namespace detail

// Sample i of the microcanonical ensemble. Kepler orbit with semi-major axis
// Z/(2|E|), eccentricity^2 ~ U[0,1], mean anomaly ~ U[0, 2 pi), isotropic
// orientation. The momentum magnitude is then fixed from the energy shell.
inline ClassicalState sample_microcanonical_one(const EnsembleSpec& spec, const PhysicalConstants& k,
                                                std::uint64_t index) {
  SplitMix64 rng = SplitMix64::stream(spec.seed, index);
  const double a = spec.Z / (2.0 * std::fabs(spec.binding_energy));
  const double n = std::sqrt(spec.Z / (k.m * a * a * a));
  const double ecc = std::sqrt(rng.uniform());
  const double mean_anomaly = 2.0 * pi * rng.uniform();
  const double u = detail::solve_kepler(mean_anomaly, ecc);
  const double root = std::sqrt(std::fmax(0.0, 1.0 - ecc * ecc));
  const double r = a * (1.0 - ecc * std::cos(u));
  const Vec3 pos{a * (std::cos(u) - ecc), a * root * std::sin(u), 0.0};
  const double speed_scale = n * a * a / r;
  Vec3 mom = k.m * Vec3{-speed_scale * std::sin(u), speed_scale * root * std::cos(u), 0.0};

  const auto rows = detail::random_rotation(rng);
  ClassicalState s;
  s.r = detail::rotate(rows, pos);
  const double rr = norm(s.r);
  const double p_shell = std::sqrt(std::fmax(0.0, 2.0 * k.m * (spec.binding_energy + spec.Z / rr)));
  const double p_now = norm(mom);
  s.p = p_now > 0.0 ? detail::rotate(rows, mom) * (p_shell / p_now) : Vec3{};
  return s;
}

inline std::vector<ClassicalState> sample_microcanonical(const EnsembleSpec& spec,
                                                         const PhysicalConstants& k = {}) {
  spec.validate();
  std::vector<ClassicalState> out;
  out.reserve(static_cast<std::size_t>(spec.n_traj));
  for (long i = 0; i < spec.n_traj; ++i) out.push_back(sample_microcanonical_one(spec, k, i));
  return out;
}

enum class TrajectoryOutcome : std::uint8_t { bound, ionized, flagged };

struct CtmcOptions {
  double tol = 1e-9;
  // Field-free propagation after the pulse, in units of the pulse duration.
  double coast_factor = 1.0;
  unsigned threads = 1;
  bool keep_outcomes = false;
};

struct CtmcResult {
  double p_ion = 0.0;
  double std_error = 0.0;
  long n_ok = 0;
  long n_flagged = 0;
  long n_ionized = 0;
  HamiltonianVariant variant{};
  double E0 = 0.0;
  double omega = 0.0;
  int n_cycles = 0;
  long n_traj = 0;
  std::uint64_t seed = 0;
  std::vector<TrajectoryOutcome> outcomes;  // filled if CtmcOptions::keep_outcomes
};

// Energy after the field is gone, from the kinetic momentum at the final state.
inline double asymptotic_energy(HamiltonianVariant v, const ClassicalState& s, const Potential& pot,
                                const PulseParams& pulse, const PhysicalConstants& k) {
  const double A = vector_potential(phase(s.t, s.r, pulse, k), pulse);
  const Vec3 pk = kinetic_momentum_of(v, s.p, A, pulse, k);
  const double V = pot.value(s.r);
  if (is_relativistic(v)) return relativistic_kinetic_energy(norm2(pk), k) + V;
  return norm2(pk) / (2.0 * k.m) + V;
}

inline TrajectoryOutcome classify_trajectory(const ClassicalState& s0, HamiltonianVariant v, const Potential& pot,
                                             const PulseParams& pulse, const PhysicalConstants& k,
                                             const CtmcOptions& opt) {
  const double t_end = pulse_duration(pulse) * (1.0 + opt.coast_factor);
  IntegrateOptions io;
  io.mode = SampleMode::endpoints;
  const Trajectory tr = integrate(s0, v, pot, pulse, k, t_end, opt.tol, io);
  if (!tr.ok()) return TrajectoryOutcome::flagged;
  return asymptotic_energy(v, tr.final_state(), pot, pulse, k) > 0.0 ? TrajectoryOutcome::ionized
                                                                     : TrajectoryOutcome::bound;
}

inline CtmcResult run_ctmc(const EnsembleSpec& spec, HamiltonianVariant v, const PulseParams& pulse,
                           const PhysicalConstants& k, const CtmcOptions& opt = {}) {
  spec.validate();
  pulse.validate();
  k.validate();
  const Potential pot = Potential::coulomb(spec.Z);
  std::vector<TrajectoryOutcome> outcomes(static_cast<std::size_t>(spec.n_traj));
  parallel_for(outcomes.size(), opt.threads, [&](std::size_t i) {
    const ClassicalState s0 = sample_microcanonical_one(spec, k, i);
    outcomes[i] = classify_trajectory(s0, v, pot, pulse, k, opt);
  });

  CtmcResult res;
  for (auto o : outcomes) {
    if (o == TrajectoryOutcome::flagged) ++res.n_flagged;
    else ++res.n_ok;
    if (o == TrajectoryOutcome::ionized) ++res.n_ionized;
  }
  res.p_ion = res.n_ok > 0 ? static_cast<double>(res.n_ionized) / static_cast<double>(res.n_ok) : 0.0;
  res.std_error = res.n_ok > 0 ? std::sqrt(res.p_ion * (1.0 - res.p_ion) / static_cast<double>(res.n_ok)) : 0.0;
  res.variant = v;
  res.E0 = pulse.E0;
  res.omega = pulse.omega;
  res.n_cycles = pulse.n_cycles;
  res.n_traj = spec.n_traj;
  res.seed = spec.seed;
  if (opt.keep_outcomes) res.outcomes = std::move(outcomes);
  return res;
}

// Runs every (E0, variant) pair. The ensemble seed is shared across variants
// at each E0 (common random numbers). Rows are ordered variant-major.
inline std::vector<CtmcResult> sweep(const EnsembleSpec& spec, const std::vector<HamiltonianVariant>& variants,
                                     const PulseParams& base, const std::vector<double>& E0_grid,
                                     const PhysicalConstants& k, const CtmcOptions& opt = {}) {
  if (E0_grid.empty()) throw InvalidArgument("ctmc sweep: empty E0 grid");
  if (variants.empty()) throw InvalidArgument("ctmc sweep: no variants");
  std::vector<CtmcResult> rows;
  for (auto v : variants) {
    for (double E0 : E0_grid) {
      PulseParams p = base;
      p.E0 = E0;
      rows.push_back(run_ctmc(spec, v, p, k, opt));
    }
  }
  return rows;
}

// Fraction of trajectories (flagged in either run excluded) whose
// classification agrees between two runs on the same ensemble.
inline double classification_agreement(const CtmcResult& a, const CtmcResult& b) {
  if (a.outcomes.size() != b.outcomes.size() || a.outcomes.empty())
    throw InvalidArgument("classification_agreement: runs need matching per-trajectory outcomes");
  long same = 0, total = 0;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    if (a.outcomes[i] == TrajectoryOutcome::flagged || b.outcomes[i] == TrajectoryOutcome::flagged) continue;
    ++total;
    if (a.outcomes[i] == b.outcomes[i]) ++same;
  }
  return total > 0 ? static_cast<double>(same) / static_cast<double>(total) : 1.0;
}

inline double combined_stderr(const CtmcResult& a, const CtmcResult& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

inline void write_ctmc_table(std::ostream& os, const std::vector<CtmcResult>& rows) {
  os.precision(17);
  os << "variant\tE0\tomega\tn_cycles\tn_traj\tseed\tp_ion\tstderr\tn_flagged\n";
  for (const auto& r : rows) {
    os << to_string(r.variant) << '\t' << r.E0 << '\t' << r.omega << '\t' << r.n_cycles << '\t' << r.n_traj << '\t'
       << r.seed << '\t' << r.p_ion << '\t' << r.std_error << '\t' << r.n_flagged << '\n';
  }
}

}  // namespace semirel

#endif  // SEMIREL_CTMC_HPP
