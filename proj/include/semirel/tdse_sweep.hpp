#ifndef SEMIREL_TDSE_SWEEP_HPP
#define SEMIREL_TDSE_SWEEP_HPP

// Ionization sweeps over field strength and variant on a fixed grid.

#include "parallel.hpp"
#include "tdse.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace semirel {

// Largest step keeping the carrier phase advance omega*dt below max_phase.
inline double tdse_time_step(const PulseParams& pulse, double max_phase) {
  if (!(max_phase > 0.0)) throw InvalidArgument("tdse.max_quiver_phase must be > 0");
  return max_phase / pulse.omega;
}

struct SofteningResult {
  double a = 0.0;
  double energy = 0.0;
  int iterations = 0;
};

// Bisects the soft-core parameter until the grid ground-state energy is
// within tol of target. In 1D the conventional a^2 = 2 is returned as is.
inline SofteningResult calibrate_softening(const GridSpec& grid, double Z, const PhysicalConstants& k = {},
                                           double target = -0.5, double tol = 1e-3, EigenOptions opt = {}) {
  if (grid.dims == 1) {
    const double a = std::sqrt(2.0);
    return {a, ground_state(grid, Potential::softcore(Z, a), k, opt).energy, 0};
  }
  double lo = 0.05, hi = 4.0;  // E(a) increases with a
  SofteningResult r;
  for (r.iterations = 1; r.iterations <= 60; ++r.iterations) {
    r.a = 0.5 * (lo + hi);
    r.energy = ground_state(grid, Potential::softcore(Z, r.a), k, opt).energy;
    if (std::fabs(r.energy - target) < tol) return r;
    (r.energy < target ? lo : hi) = r.a;
  }
  throw NumericalError("calibrate_softening: no softening reaches the target energy on this grid");
}

struct TdseRow {
  QuantumVariant variant{};
  double E0 = 0.0;
  double p_ion = 0.0;
};

struct TdseSweepSpec {
  GridSpec grid;
  Potential potential;
  PulseParams base;  // E0 is replaced by each grid value
  std::vector<double> E0_grid;
  std::vector<QuantumVariant> variants;
  double dt = 0.01;
  PropagatorOptions propagator;
  EigenOptions eigen;
  unsigned threads = 1;
  bool keep_states = false;
};

struct TdseSweepResult {
  double ground_energy = 0.0;
  int n_bound = 0;
  std::vector<TdseRow> rows;      // variant-major
  std::vector<WaveState> states;  // final states, same order, if kept
};

inline TdseSweepResult tdse_sweep(const TdseSweepSpec& spec, const PhysicalConstants& k = {}) {
  if (spec.E0_grid.empty()) throw InvalidArgument("tdse sweep: empty E0 grid");
  if (spec.variants.empty()) throw InvalidArgument("tdse sweep: no variants");
  const GroundState gs = ground_state(spec.grid, spec.potential, k, spec.eigen);
  const BoundBasis basis = bound_basis(spec.grid, spec.potential, k, spec.eigen);

  TdseSweepResult out;
  out.ground_energy = gs.energy;
  out.n_bound = basis.n_bound();
  for (auto v : spec.variants)
    for (double E0 : spec.E0_grid) out.rows.push_back({v, E0, 0.0});
  out.states.resize(spec.keep_states ? out.rows.size() : 0);

  parallel_for(out.rows.size(), spec.threads, [&](std::size_t i) {
    PulseParams p = spec.base;
    p.E0 = out.rows[i].E0;
    SplitStepPropagator prop(spec.grid, spec.potential, p, out.rows[i].variant, k, spec.propagator);
    WaveState psi = gs.psi;
    propagate_until(psi, prop, pulse_duration(p), spec.dt);
    out.rows[i].p_ion = ionization_probability(psi, basis);
    if (spec.keep_states) out.states[i] = std::move(psi);
  });
  return out;
}

inline double find_p_ion(const std::vector<TdseRow>& rows, QuantumVariant v, double E0) {
  for (const auto& r : rows)
    if (r.variant == v && r.E0 == E0) return r.p_ion;
  throw InvalidArgument("tdse sweep: no row for " + std::string(to_string(v)));
}

struct Fig1Difference {
  double E0 = 0.0;
  double p_nr = 0.0, p_sr = 0.0, p_srn = 0.0;
  double nr_minus_sr() const { return p_nr - p_sr; }
  double nr_minus_srn() const { return p_nr - p_srn; }
  double srn_minus_sr() const { return p_srn - p_sr; }
  // |P(SR_NEXT) - P(SR_LEADING)| / |P(NR) - P(SR_LEADING)|
  double next_order_ratio() const { return std::fabs(srn_minus_sr()) / std::fabs(nr_minus_sr()); }
};

inline std::vector<Fig1Difference> fig1_differences(const std::vector<TdseRow>& rows,
                                                    const std::vector<double>& E0_grid) {
  std::vector<Fig1Difference> out;
  for (double E0 : E0_grid) {
    out.push_back({E0, find_p_ion(rows, QuantumVariant::nr, E0), find_p_ion(rows, QuantumVariant::sr_leading, E0),
                   find_p_ion(rows, QuantumVariant::sr_next, E0)});
  }
  return out;
}

// Same sweep with dt halved and n doubled per axis at fixed box size.
inline TdseSweepSpec refined(const TdseSweepSpec& spec) {
  TdseSweepSpec r = spec;
  r.dt = 0.5 * spec.dt;
  for (int a = 0; a < spec.grid.dims; ++a) r.grid.n[a] = 2 * spec.grid.n[a];
  r.keep_states = false;
  return r;
}

struct ConvergenceRow {
  QuantumVariant variant{};
  double E0 = 0.0;
  double p_ion = 0.0;
  double p_ion_refined = 0.0;
  double relative_change() const { return std::fabs(p_ion_refined - p_ion) / std::fabs(p_ion); }
};

inline std::vector<ConvergenceRow> convergence_rows(const TdseSweepResult& base, const TdseSweepResult& fine) {
  std::vector<ConvergenceRow> out;
  for (std::size_t i = 0; i < base.rows.size(); ++i)
    out.push_back({base.rows[i].variant, base.rows[i].E0, base.rows[i].p_ion, fine.rows[i].p_ion});
  return out;
}

inline void write_tdse_table(std::ostream& os, const TdseSweepSpec& spec, const std::vector<TdseRow>& rows) {
  os.precision(17);
  os << "variant\tE0\tomega\tn_cycles\tdims\tn\tL\tdt\tP_ion\n";
  for (const auto& r : rows) {
    os << to_string(r.variant) << '\t' << r.E0 << '\t' << spec.base.omega << '\t' << spec.base.n_cycles << '\t'
       << spec.grid.dims << '\t' << spec.grid.n[0] << '\t' << spec.grid.L[0] << '\t' << spec.dt << '\t' << r.p_ion
       << '\n';
  }
}

inline void write_fig1_differences(std::ostream& os, const std::vector<Fig1Difference>& diffs) {
  os.precision(17);
  os << "E0\tP_NR\tP_SR_LEADING\tP_SR_NEXT\tNR_minus_SR_LEADING\tNR_minus_SR_NEXT\tSR_NEXT_minus_SR_LEADING\t"
        "next_order_ratio\n";
  for (const auto& d : diffs) {
    os << d.E0 << '\t' << d.p_nr << '\t' << d.p_sr << '\t' << d.p_srn << '\t' << d.nr_minus_sr() << '\t'
       << d.nr_minus_srn() << '\t' << d.srn_minus_sr() << '\t' << d.next_order_ratio() << '\n';
  }
}

inline void write_convergence_table(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os.precision(17);
  os << "variant\tE0\tP_ion\tP_ion_refined\trelative_change\n";
  for (const auto& r : rows) {
    os << to_string(r.variant) << '\t' << r.E0 << '\t' << r.p_ion << '\t' << r.p_ion_refined << '\t'
       << r.relative_change() << '\n';
  }
}

}  // namespace semirel

#endif  // SEMIREL_TDSE_SWEEP_HPP
