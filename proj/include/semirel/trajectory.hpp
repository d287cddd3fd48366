#ifndef SEMIREL_TRAJECTORY_HPP
#define SEMIREL_TRAJECTORY_HPP

#include "classical.hpp"
#include "dopri5.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

namespace semirel {

enum class TrajectoryStatus {
  ok,
  close_encounter,  // Coulomb singularity could not be stepped around
  stiff,            // step size underflow
};

inline std::string_view to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::ok: return "ok";
    case TrajectoryStatus::close_encounter: return "close_encounter";
    case TrajectoryStatus::stiff: return "stiff";
  }
  return "";
}

struct TrajectoryDiagnostics {
  double final_energy = 0.0;
  long steps = 0;
  long rejected = 0;
  double max_error_estimate = 0.0;  // max accepted local error, in units of tol
};

struct Trajectory {
  std::vector<ClassicalState> samples;
  HamiltonianVariant variant = HamiltonianVariant::semirel;
  TrajectoryStatus status = TrajectoryStatus::ok;
  TrajectoryDiagnostics diagnostics;

  bool ok() const { return status == TrajectoryStatus::ok; }
  const ClassicalState& final_state() const { return samples.back(); }
};

enum class SampleMode {
  every_step,  // initial state plus every accepted step
  endpoints,   // initial and final states only
};

struct IntegrateOptions {
  SampleMode mode = SampleMode::every_step;
  // If non-empty, overrides `mode`: states are recorded exactly at these
  // times (strictly increasing, inside (s0.t, t_end]) by landing steps on them.
  std::vector<double> sample_times;
  double h_min = 1e-14;
  double h_max = 0.0;
  FieldModel field_model = FieldModel::plane_wave;
};

namespace detail {

using PhaseArray = std::array<double, 6>;

inline PhaseArray pack(const ClassicalState& s) {
  return {s.r[0], s.r[1], s.r[2], s.p[0], s.p[1], s.p[2]};
}

inline ClassicalState unpack(double t, const PhaseArray& y) {
  return {Vec3{y[0], y[1], y[2]}, Vec3{y[3], y[4], y[5]}, t};
}

}  // namespace detail

// Integrates Hamilton's equations from s0 to t_end with local error <= tol
// (mixed absolute/relative) per step. A Coulomb close encounter or step
// underflow stops the integration and returns the partial trajectory with
// the corresponding status.
inline Trajectory integrate(const ClassicalState& s0, HamiltonianVariant v, const Potential& pot,
                            const PulseParams& pulse, const PhysicalConstants& k, double t_end, double tol,
                            const IntegrateOptions& opt = {}) {
  if (!(t_end > s0.t)) throw InvalidArgument("integrate: t_end must exceed the initial time");
  if (!(tol > 0.0)) throw InvalidArgument("integrate: tol must be > 0");
  if (!is_finite(s0.r) || !is_finite(s0.p) || !std::isfinite(s0.t))
    throw InvalidArgument("integrate: non-finite initial state");
  for (std::size_t i = 0; i < opt.sample_times.size(); ++i) {
    const double ts = opt.sample_times[i];
    if (!(ts > s0.t) || ts > t_end || (i > 0 && !(ts > opt.sample_times[i - 1])))
      throw InvalidArgument("integrate: sample_times must be strictly increasing inside (t0, t_end]");
  }

  Trajectory traj;
  traj.variant = v;
  traj.samples.push_back(s0);

  auto rhs = [&](double t, const detail::PhaseArray& y, detail::PhaseArray& dy) {
    const ClassicalState s = detail::unpack(t, y);
    if (pot.singular_at(norm2(s.r))) return false;
    const PhaseVelocity f = equations_of_motion(s, v, pot, pulse, k, opt.field_model);
    dy = {f.dr[0], f.dr[1], f.dr[2], f.dp[0], f.dp[1], f.dp[2]};
    return true;
  };

  Dopri5<6> stepper({tol, opt.h_min, opt.h_max});
  double t = s0.t;
  detail::PhaseArray y = detail::pack(s0);
  double h = 0.0;
  StepStatus status = StepStatus::ok;

  const bool sampled = !opt.sample_times.empty();
  if (sampled) {
    for (double ts : opt.sample_times) {
      status = stepper.advance(rhs, t, y, ts, h, [](double, const detail::PhaseArray&) {});
      if (status != StepStatus::ok) break;
      traj.samples.push_back(detail::unpack(t, y));
    }
    if (status == StepStatus::ok && t < t_end)
      status = stepper.advance(rhs, t, y, t_end, h, [](double, const detail::PhaseArray&) {});
  } else if (opt.mode == SampleMode::every_step) {
    status = stepper.advance(rhs, t, y, t_end, h, [&](double ts, const detail::PhaseArray& ys) {
      traj.samples.push_back(detail::unpack(ts, ys));
    });
  } else {
    status = stepper.advance(rhs, t, y, t_end, h, [](double, const detail::PhaseArray&) {});
  }

  const ClassicalState last = detail::unpack(t, y);
  if (traj.samples.back().t < last.t) traj.samples.push_back(last);

  switch (status) {
    case StepStatus::ok: traj.status = TrajectoryStatus::ok; break;
    case StepStatus::refused: traj.status = TrajectoryStatus::close_encounter; break;
    case StepStatus::underflow: traj.status = TrajectoryStatus::stiff; break;
  }
  traj.diagnostics.steps = stepper.stats().accepted;
  traj.diagnostics.rejected = stepper.stats().rejected;
  traj.diagnostics.max_error_estimate = stepper.stats().max_error_ratio;
  traj.diagnostics.final_energy =
      pot.singular_at(norm2(last.r)) ? std::nan("") : hamiltonian_value(last, v, pot, pulse, k, opt.field_model);
  return traj;
}

// Columnar dump: header comment lines, then one row per sample with
// t, r(3), p(3), kinetic momentum(3), H.
inline void write_trajectory(std::ostream& os, const Trajectory& traj, const Potential& pot,
                             const PulseParams& pulse, const PhysicalConstants& k) {
  os.precision(17);
  os << "# variant " << to_string(traj.variant) << "\n";
  os << "# E0 " << pulse.E0 << " omega " << pulse.omega << " n_cycles " << pulse.n_cycles << " cep " << pulse.cep
     << "\n";
  os << "# potential " << to_string(pot.kind) << " Z " << pot.Z << " a " << pot.a << "\n";
  os << "# status " << to_string(traj.status) << " steps " << traj.diagnostics.steps << "\n";
  os << "t\tx\ty\tz\tpx\tpy\tpz\tdx\tdy\tdz\tH\n";
  for (const auto& s : traj.samples) {
    const double A = vector_potential(phase(s.t, s.r, pulse, k), pulse);
    const Vec3 d = kinetic_momentum_of(traj.variant, s.p, A, pulse, k);
    const double H = pot.singular_at(norm2(s.r)) ? std::nan("") : hamiltonian_value(s, traj.variant, pot, pulse, k);
    os << s.t << '\t' << s.r[0] << '\t' << s.r[1] << '\t' << s.r[2] << '\t' << s.p[0] << '\t' << s.p[1] << '\t'
       << s.p[2] << '\t' << d[0] << '\t' << d[1] << '\t' << d[2] << '\t' << H << '\n';
  }
}

}  // namespace semirel

#endif  // SEMIREL_TRAJECTORY_HPP
