#ifndef SEMIREL_RUNNER_HPP
#define SEMIREL_RUNNER_HPP

// Executes a validated RunConfig. All results are computed first and held in
// memory; files are written afterwards by one writer, so a failed run leaves
// no partial tables behind.

#include "checkpoint.hpp"
#include "config.hpp"
#include "ctmc.hpp"
#include "free_electron.hpp"
#include "tdse_sweep.hpp"
#include "trajectory.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef SEMIREL_VERSION
#define SEMIREL_VERSION "unknown"
#endif

namespace semirel {

inline constexpr const char* version = SEMIREL_VERSION;

struct Artifact {
  std::string name;
  std::string content;
};

struct RunOutput {
  std::vector<Artifact> files;
  std::vector<std::pair<std::string, std::string>> derived;  // reported in the manifest
};

namespace detail {

inline std::string shortest(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class Fn>
Artifact table(std::string name, Fn&& write) {
  std::ostringstream os;
  write(os);
  return {std::move(name), os.str()};
}

inline RunOutput run_trajectory(const RunConfig& cfg) {
  RunOutput out;
  const double t_end = cfg.t_end > 0.0 ? cfg.t_end : pulse_duration(cfg.pulse);
  out.derived.emplace_back("trajectory.t_end", shortest(t_end));
  for (auto v : cfg.classical_variants) {
    const Trajectory tr = integrate(ClassicalState{cfg.r0, cfg.p0, 0.0}, v, cfg.potential, cfg.pulse, cfg.constants,
                                    t_end, cfg.integrator_tol);
    out.files.push_back(table("trajectory_" + std::string(to_string(v)) + ".tsv",
                              [&](std::ostream& os) { write_trajectory(os, tr, cfg.potential, cfg.pulse, cfg.constants); }));
  }
  return out;
}

inline RunOutput run_free_sweep(const RunConfig& cfg) {
  FreeElectronOptions opt;
  opt.tol = cfg.integrator_tol;
  const auto rows = free_sweep(cfg.pulse, cfg.omega_grid, cfg.quiver_grid, cfg.classical_variants, cfg.constants, opt);
  RunOutput out;
  out.files.push_back(table("free_sweep.tsv", [&](std::ostream& os) { write_free_sweep_table(os, rows); }));
  return out;
}

inline CtmcOptions ctmc_options(const RunConfig& cfg, bool keep) {
  CtmcOptions o;
  o.tol = cfg.integrator_tol;
  o.coast_factor = cfg.coast_factor;
  o.threads = cfg.threads;
  o.keep_outcomes = keep;
  return o;
}

inline RunOutput run_ctmc_mode(const RunConfig& cfg) {
  const auto rows = sweep(cfg.ensemble, cfg.classical_variants, cfg.pulse, {cfg.pulse.E0}, cfg.constants,
                          ctmc_options(cfg, false));
  RunOutput out;
  out.files.push_back(table("ctmc.tsv", [&](std::ostream& os) { write_ctmc_table(os, rows); }));
  return out;
}

inline void write_agreement_table(std::ostream& os, const std::vector<CtmcResult>& rows, const PhysicalConstants& k) {
  os.precision(17);
  os << "variant\tE0\tquiver\tp_ion\tp_ion_REL_PROPGAUGE\tdifference\tcombined_stderr\tz\tagreement\n";
  for (const auto& r : rows) {
    if (r.variant == HamiltonianVariant::rel_propgauge) continue;
    for (const auto& ref : rows) {
      if (ref.variant != HamiltonianVariant::rel_propgauge || ref.E0 != r.E0) continue;
      PulseParams p;
      p.E0 = r.E0;
      p.omega = r.omega;
      const double se = combined_stderr(r, ref);
      const double diff = r.p_ion - ref.p_ion;
      os << to_string(r.variant) << '\t' << r.E0 << '\t' << quiver_parameter(p, k) << '\t' << r.p_ion << '\t'
         << ref.p_ion << '\t' << diff << '\t' << se << '\t' << (se > 0.0 ? diff / se : 0.0) << '\t'
         << classification_agreement(r, ref) << '\n';
    }
  }
}

inline RunOutput run_fig2(const RunConfig& cfg) {
  const auto rows = sweep(cfg.ensemble, cfg.classical_variants, cfg.pulse, cfg.E0_grid, cfg.constants,
                          ctmc_options(cfg, true));
  RunOutput out;
  out.files.push_back(table("ctmc_sweep.tsv", [&](std::ostream& os) { write_ctmc_table(os, rows); }));
  out.files.push_back(
      table("fig2_agreement.tsv", [&](std::ostream& os) { write_agreement_table(os, rows, cfg.constants); }));
  return out;
}

inline TdseSweepSpec tdse_spec(const RunConfig& cfg, RunOutput& out) {
  TdseSweepSpec spec;
  spec.grid = cfg.grid;
  spec.potential = cfg.potential;
  spec.eigen.residual_tol = cfg.eigen_tol;
  spec.eigen.seed = cfg.ensemble.seed;
  if (cfg.auto_softening) {
    const auto s = calibrate_softening(cfg.grid, cfg.potential.Z, cfg.constants, -0.5, 1e-3, spec.eigen);
    spec.potential.a = s.a;
    out.derived.emplace_back("potential.softening", shortest(s.a));
  }
  spec.base = cfg.pulse;
  spec.E0_grid = cfg.mode == RunMode::fig1 ? cfg.E0_grid : std::vector<double>{cfg.pulse.E0};
  spec.variants = cfg.quantum_variants;
  spec.dt = cfg.dt > 0.0 ? cfg.dt : tdse_time_step(cfg.pulse, cfg.max_quiver_phase);
  spec.propagator.absorber = cfg.absorber;
  spec.propagator.absorber_fraction = cfg.absorber_fraction;
  spec.threads = cfg.threads;
  spec.keep_states = cfg.mode == RunMode::tdse;
  out.derived.emplace_back("tdse.dt", shortest(spec.dt));
  return spec;
}

inline RunOutput run_tdse_mode(const RunConfig& cfg) {
  RunOutput out;
  const TdseSweepSpec spec = tdse_spec(cfg, out);
  const TdseSweepResult res = tdse_sweep(spec, cfg.constants);
  out.derived.emplace_back("ground_energy", shortest(res.ground_energy));
  out.derived.emplace_back("n_bound", std::to_string(res.n_bound));

  const std::string name = cfg.mode == RunMode::fig1 ? "tdse_sweep.tsv" : "tdse.tsv";
  out.files.push_back(table(name, [&](std::ostream& os) { write_tdse_table(os, spec, res.rows); }));
  if (cfg.mode == RunMode::fig1) {
    const auto diffs = fig1_differences(res.rows, spec.E0_grid);
    out.files.push_back(table("fig1_differences.tsv", [&](std::ostream& os) { write_fig1_differences(os, diffs); }));
  }
  for (std::size_t i = 0; i < res.states.size(); ++i) {
    out.files.push_back(table("psi_" + std::string(to_string(res.rows[i].variant)) + ".bin",
                              [&](std::ostream& os) { write_checkpoint(os, spec.grid, res.states[i]); }));
  }
  if (cfg.convergence_check) {
    const TdseSweepResult fine = tdse_sweep(refined(spec), cfg.constants);
    const auto rows = convergence_rows(res, fine);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.relative_change());
    out.derived.emplace_back("convergence.max_relative_change", shortest(worst));
    out.files.push_back(table("convergence.tsv", [&](std::ostream& os) { write_convergence_table(os, rows); }));
  }
  return out;
}

}  // namespace detail

// Computes every output of the configured mode without touching the disk.
inline RunOutput execute(const RunConfig& cfg) {
  switch (cfg.mode) {
    case RunMode::trajectory: return detail::run_trajectory(cfg);
    case RunMode::free_sweep: return detail::run_free_sweep(cfg);
    case RunMode::ctmc: return detail::run_ctmc_mode(cfg);
    case RunMode::fig2: return detail::run_fig2(cfg);
    case RunMode::tdse:
    case RunMode::fig1: return detail::run_tdse_mode(cfg);
  }
  throw InvalidArgument("unknown mode");
}

inline std::string manifest_text(const RunConfig& cfg, const RunOutput& out, double wall_seconds) {
  std::ostringstream os;
  os << "# semirel run manifest\n";
  os << "version = " << version << '\n';
  os << "mode = " << to_string(cfg.mode) << '\n';
  os << "seed = " << cfg.ensemble.seed << '\n';
  os << "wall_time_s = " << detail::shortest(wall_seconds) << '\n';
  os << "\n[config]\n";
  for (const auto& [key, value] : cfg.echo) os << key << " = " << value << '\n';
  if (!out.derived.empty()) {
    os << "\n[derived]\n";
    for (const auto& [key, value] : out.derived) os << key << " = " << value << '\n';
  }
  os << "\n[files]\n";
  for (const auto& f : out.files) os << f.name << '\n';
  return os.str();
}

inline std::vector<std::string> write_outputs(const std::filesystem::path& dir, const RunOutput& out,
                                              const std::string& manifest) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
    if (!f) throw Error("cannot write " + (dir / name).string());
    written.push_back(name);
  };
  for (const auto& a : out.files) put(a.name, a.content);
  put("manifest.txt", manifest);
  return written;
}

// Runs the configuration and writes its tables plus manifest.txt into
// cfg.output_dir. Returns the written file names.
inline std::vector<std::string> run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const RunOutput out = execute(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return write_outputs(cfg.output_dir, out, manifest_text(cfg, out, wall));
}

// Machine-readable description of a failure, for the CLI's stderr.
inline nlohmann::json error_summary(const std::exception& e) {
  nlohmann::json j;
  j["status"] = "error";
  j["message"] = e.what();
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
    j["kind"] = "validation";
    j["issues"] = nlohmann::json::array();
    for (const auto& i : ce->issues()) j["issues"].push_back({{"key", i.key}, {"message", i.message}});
  } else if (dynamic_cast<const SingularityError*>(&e)) {
    j["kind"] = "singularity";
  } else if (dynamic_cast<const NumericalError*>(&e)) {
    j["kind"] = "numerical";
  } else if (dynamic_cast<const InvalidArgument*>(&e)) {
    j["kind"] = "invalid_argument";
  } else {
    j["kind"] = "runtime";
  }
  return j;
}

}  // namespace semirel

#endif  // SEMIREL_RUNNER_HPP
