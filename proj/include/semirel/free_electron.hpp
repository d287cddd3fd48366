#ifndef SEMIREL_FREE_ELECTRON_HPP
#define SEMIREL_FREE_ELECTRON_HPP

// Free electron initially at rest at the origin, driven by the pulse alone.

#include "trajectory.hpp"

#include <algorithm>
#include <ostream>
#include <vector>

namespace semirel {

struct FreeElectronResult {
  HamiltonianVariant variant{};
  Vec3 final_kinetic_momentum;
  Vec3 displacement;
  Trajectory trajectory;  // sampled on the common time grid
};

struct FreeElectronOptions {
  double tol = 1e-12;
  int n_samples = 200;  // uniform samples on (0, t_end]
};

// Time by which an electron starting at rest at the origin has been overtaken
// by the whole pulse for every variant (phase slip bounded by the peak mass
// ratio for the dressed variants and by the undressed drift for NONREL).
inline double free_electron_end_time(const PulseParams& pulse, const PhysicalConstants& k) {
  const double a0 = quiver_parameter(pulse, k);
  const double stretch_rel = 1.0 + 0.5 * a0 * a0;
  const double slow = 1.0 - 0.5 * a0 * a0;
  const double stretch_nonrel = slow > 0.05 ? 1.0 / slow : 20.0;
  return 1.05 * pulse_duration(pulse) * std::max(stretch_rel, stretch_nonrel);
}

inline std::vector<FreeElectronResult> free_electron_comparison(const PulseParams& pulse,
                                                                const PhysicalConstants& k,
                                                                const std::vector<HamiltonianVariant>& variants,
                                                                const FreeElectronOptions& opt = {}) {
  pulse.validate();
  k.validate();
  const double t_end = free_electron_end_time(pulse, k);
  IntegrateOptions io;
  for (int i = 1; i < opt.n_samples; ++i) io.sample_times.push_back(t_end * i / opt.n_samples);
  io.sample_times.push_back(t_end);

  std::vector<FreeElectronResult> out;
  out.reserve(variants.size());
  for (auto v : variants) {
    FreeElectronResult res;
    res.variant = v;
    res.trajectory = integrate(ClassicalState{}, v, Potential::none(), pulse, k, t_end, opt.tol, io);
    if (!res.trajectory.ok()) throw NumericalError("free-electron trajectory failed to integrate");
    const ClassicalState& f = res.trajectory.final_state();
    const double A = vector_potential(phase(f.t, f.r, pulse, k), pulse);
    res.final_kinetic_momentum = kinetic_momentum_of(v, f.p, A, pulse, k);
    res.displacement = f.r;
    out.push_back(std::move(res));
  }
  return out;
}

// max_t |r_a(t) - r_b(t)| / max_t |r_b(t)| over trajectories sampled on the
// same time grid.
inline double max_relative_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.samples.size() != b.samples.size()) throw InvalidArgument("trajectories sampled on different grids");
  double dev = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    dev = std::max(dev, norm(a.samples[i].r - b.samples[i].r));
    scale = std::max(scale, norm(b.samples[i].r));
  }
  return scale > 0.0 ? dev / scale : dev;
}

struct FreeSweepRow {
  double omega = 0.0;
  double quiver = 0.0;
  double E0 = 0.0;
  HamiltonianVariant variant{};
  Vec3 displacement;
  Vec3 final_kinetic_momentum;
  double deviation_vs_rel = 0.0;  // max_relative_deviation against REL_PROPGAUGE
};

// Free-electron comparison over an (omega, quiver) grid; E0 follows from the
// quiver parameter e E0 / (m omega c).
inline std::vector<FreeSweepRow> free_sweep(const PulseParams& base, const std::vector<double>& omega_grid,
                                            const std::vector<double>& quiver_grid,
                                            const std::vector<HamiltonianVariant>& variants,
                                            const PhysicalConstants& k, const FreeElectronOptions& opt = {}) {
  std::vector<HamiltonianVariant> run = variants;
  if (std::find(run.begin(), run.end(), HamiltonianVariant::rel_propgauge) == run.end())
    run.push_back(HamiltonianVariant::rel_propgauge);
  std::vector<FreeSweepRow> rows;
  for (double omega : omega_grid) {
    for (double a0 : quiver_grid) {
      PulseParams p = base;
      p.omega = omega;
      p.E0 = a0 * k.m * omega * k.c / k.e;
      const auto res = free_electron_comparison(p, k, run, opt);
      const auto ref = std::find_if(res.begin(), res.end(),
                                    [](const auto& r) { return r.variant == HamiltonianVariant::rel_propgauge; });
      for (std::size_t i = 0; i < variants.size(); ++i) {
        rows.push_back({omega, a0, p.E0, res[i].variant, res[i].displacement, res[i].final_kinetic_momentum,
                        max_relative_deviation(res[i].trajectory, ref->trajectory)});
      }
    }
  }
  return rows;
}

inline void write_free_sweep_table(std::ostream& os, const std::vector<FreeSweepRow>& rows) {
  os.precision(17);
  os << "omega\tquiver\tE0\tvariant\tdisp_x\tdisp_y\tdisp_z\tkin_px\tkin_py\tkin_pz\tmax_rel_dev_vs_REL_PROPGAUGE\n";
  for (const auto& r : rows) {
    os << r.omega << '\t' << r.quiver << '\t' << r.E0 << '\t' << to_string(r.variant);
    for (double x : r.displacement.v) os << '\t' << x;
    for (double x : r.final_kinetic_momentum.v) os << '\t' << x;
    os << '\t' << r.deviation_vs_rel << '\n';
  }
}

}  // namespace semirel

#endif  // SEMIREL_FREE_ELECTRON_HPP
