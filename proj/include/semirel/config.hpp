#ifndef SEMIREL_CONFIG_HPP
#define SEMIREL_CONFIG_HPP

// Plain-text run configuration: one `key = value` per line, dotted keys,
// `#` starts a comment. Lists are comma separated, vectors are three
// whitespace-separated numbers.

#include "classical.hpp"
#include "ctmc.hpp"
#include "grid.hpp"
#include "pulse.hpp"
#include "tdse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace semirel {

enum class RunMode { trajectory, free_sweep, ctmc, tdse, fig1, fig2 };

inline std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::trajectory: return "trajectory";
    case RunMode::free_sweep: return "free-sweep";
    case RunMode::ctmc: return "ctmc";
    case RunMode::tdse: return "tdse";
    case RunMode::fig1: return "fig1";
    case RunMode::fig2: return "fig2";
  }
  return "";
}

inline std::optional<RunMode> parse_run_mode(std::string_view s) {
  for (auto m : {RunMode::trajectory, RunMode::free_sweep, RunMode::ctmc, RunMode::tdse, RunMode::fig1,
                 RunMode::fig2}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

inline bool is_quantum(RunMode m) { return m == RunMode::tdse || m == RunMode::fig1; }

struct ConfigIssue {
  std::string key;
  std::string message;
};

class ConfigError : public InvalidArgument {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : InvalidArgument(summarize(issues)), issues_(std::move(issues)) {}
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  static std::string summarize(const std::vector<ConfigIssue>& issues) {
    std::string s = "invalid configuration:";
    for (const auto& i : issues) s += " [" + i.key + ": " + i.message + "]";
    return s;
  }
  std::vector<ConfigIssue> issues_;
};

struct RunConfig {
  RunMode mode = RunMode::trajectory;
  PulseParams pulse;
  PhysicalConstants constants;
  std::vector<HamiltonianVariant> classical_variants;
  std::vector<QuantumVariant> quantum_variants;
  Potential potential;
  bool auto_softening = false;

  // trajectory mode
  Vec3 r0;
  Vec3 p0;
  double t_end = 0.0;  // 0: pulse duration

  // free-sweep mode
  std::vector<double> omega_grid;
  std::vector<double> quiver_grid;

  // ctmc / fig2
  EnsembleSpec ensemble;
  double coast_factor = 1.0;
  std::vector<double> E0_grid;  // fig1 / fig2

  double integrator_tol = 1e-9;
  double eigen_tol = 1e-10;

  // tdse / fig1
  GridSpec grid;
  double dt = 0.0;  // 0: derived from max_quiver_phase
  double max_quiver_phase = 0.1;
  bool absorber = true;
  double absorber_fraction = 0.1;
  bool convergence_check = false;

  std::string output_dir = "results";
  unsigned threads = 1;

  // Canonical key = value echo (sorted), as parsed after overrides.
  std::map<std::string, std::string> echo;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> to_double(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

template <class Int>
inline std::optional<Int> to_integer(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  Int v{};
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto end = pos == std::string_view::npos ? s.size() : pos;
    auto item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Typed accessors that record issues instead of throwing, so every problem
// in a file is reported at once.
class Reader {
 public:
  Reader(const std::map<std::string, std::string>& kv, std::vector<ConfigIssue>& issues)
      : kv_(kv), issues_(issues) {}

  bool has(const std::string& key) {
    used_.insert(key);
    return kv_.count(key) != 0;
  }

  void require(const std::string& key) {
    if (!has(key)) issues_.push_back({key, "missing required key"});
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    if (auto v = to_double(kv_.at(key))) return *v;
    issues_.push_back({key, "expected a number, got '" + kv_.at(key) + "'"});
    return fallback;
  }

  template <class Int>
  Int integer(const std::string& key, Int fallback) {
    if (!has(key)) return fallback;
    if (auto v = to_integer<Int>(kv_.at(key))) return *v;
    issues_.push_back({key, "expected an integer, got '" + kv_.at(key) + "'"});
    return fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = kv_.at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    issues_.push_back({key, "expected true/false, got '" + v + "'"});
    return fallback;
  }

  std::string text(const std::string& key, std::string fallback) {
    if (!has(key)) return fallback;
    return kv_.at(key);
  }

  Vec3 vec3(const std::string& key, Vec3 fallback) {
    if (!has(key)) return fallback;
    std::istringstream is(kv_.at(key));
    std::string a, b, c, extra;
    is >> a >> b >> c;
    const auto x = to_double(a), y = to_double(b), z = to_double(c);
    if (!x || !y || !z || (is >> extra)) {
      issues_.push_back({key, "expected three numbers"});
      return fallback;
    }
    return {*x, *y, *z};
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    for (const auto& item : split(kv_.at(key), ',')) {
      if (auto v = to_double(item)) {
        out.push_back(*v);
      } else {
        issues_.push_back({key, "expected a comma-separated list of numbers"});
        return {};
      }
    }
    return out;
  }

  void check(bool ok, const std::string& key, const std::string& message) {
    if (!ok) issues_.push_back({key, message});
  }

  void report_unknown() {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k)) issues_.push_back({k, "unknown key"});
    }
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::vector<ConfigIssue>& issues_;
  std::set<std::string> used_;
};

}  // namespace detail

// Splits text into a key -> value map. Syntax problems are appended to
// `issues` with the key (or line number) they concern.
inline std::map<std::string, std::string> parse_key_values(std::string_view text, std::vector<ConfigIssue>& issues) {
  std::map<std::string, std::string> kv;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      issues.push_back({"line " + std::to_string(lineno), "expected 'key = value'"});
      continue;
    }
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    if (key.empty()) {
      issues.push_back({"line " + std::to_string(lineno), "empty key"});
      continue;
    }
    if (kv.count(key)) issues.push_back({key, "duplicate key"});
    kv[key] = value;
  }
  return kv;
}

// Applies `key=value` overrides (e.g. from --set) on top of the file.
inline void apply_overrides(std::map<std::string, std::string>& kv, const std::vector<std::string>& overrides,
                            std::vector<ConfigIssue>& issues) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      issues.push_back({o, "override must be key=value"});
      continue;
    }
    kv[detail::trim(o.substr(0, eq))] = detail::trim(o.substr(eq + 1));
  }
}

inline RunConfig build_config(const std::map<std::string, std::string>& kv, std::vector<ConfigIssue> issues = {}) {
  detail::Reader in(kv, issues);
  RunConfig cfg;
  cfg.echo = kv;

  in.require("mode");
  const std::string mode_text = in.text("mode", "");
  if (!mode_text.empty()) {
    if (auto m = parse_run_mode(mode_text)) cfg.mode = *m;
    else in.check(false, "mode", "unknown mode '" + mode_text + "'");
  }
  const RunMode mode = cfg.mode;
  const bool quantum = is_quantum(mode);
  const bool ensemble_mode = mode == RunMode::ctmc || mode == RunMode::fig2;
  const bool sweep_mode = mode == RunMode::fig1 || mode == RunMode::fig2;

  // pulse
  in.require("pulse.omega");
  in.require("pulse.n_cycles");
  if (!sweep_mode && mode != RunMode::free_sweep) in.require("pulse.E0");
  cfg.pulse.E0 = in.number("pulse.E0", 0.0);
  cfg.pulse.omega = in.number("pulse.omega", 1.0);
  cfg.pulse.n_cycles = in.integer<int>("pulse.n_cycles", 1);
  cfg.pulse.cep = in.number("pulse.cep", 0.0);
  cfg.pulse.pol = in.vec3("pulse.polarization", Vec3{1, 0, 0});
  cfg.pulse.prop = in.vec3("pulse.propagation", Vec3{0, 0, 1});
  in.check(cfg.pulse.omega > 0.0, "pulse.omega", "must be > 0");
  in.check(cfg.pulse.E0 >= 0.0, "pulse.E0", "must be >= 0");
  in.check(cfg.pulse.n_cycles >= 1, "pulse.n_cycles", "must be >= 1");
  in.check(std::fabs(norm(cfg.pulse.pol) - 1.0) <= 1e-12, "pulse.polarization", "must be a unit vector");
  in.check(std::fabs(norm(cfg.pulse.prop) - 1.0) <= 1e-12, "pulse.propagation", "must be a unit vector");
  in.check(std::fabs(dot(cfg.pulse.pol, cfg.pulse.prop)) <= 1e-12, "pulse.propagation",
           "must be orthogonal to pulse.polarization");

  cfg.constants.c = in.number("constants.c", cfg.constants.c);
  in.check(cfg.constants.c > 0.0, "constants.c", "must be > 0");

  // variants
  const std::string vtext = in.text("variants", "");
  const auto names = detail::split(vtext, ',');
  if (quantum) {
    for (const auto& n : names) {
      if (auto v = parse_quantum_variant(n)) cfg.quantum_variants.push_back(*v);
      else in.check(false, "variants", "unknown quantum variant '" + n + "'");
    }
    if (names.empty()) cfg.quantum_variants.assign(all_quantum_variants.begin(), all_quantum_variants.end());
    if (mode == RunMode::fig1)
      for (auto v : all_quantum_variants)
        in.check(std::find(cfg.quantum_variants.begin(), cfg.quantum_variants.end(), v) != cfg.quantum_variants.end(),
                 "variants", "fig1 needs " + std::string(to_string(v)));
  } else {
    for (const auto& n : names) {
      if (auto v = parse_hamiltonian_variant(n)) cfg.classical_variants.push_back(*v);
      else in.check(false, "variants", "unknown classical variant '" + n + "'");
    }
    if (names.empty()) {
      if (ensemble_mode)
        cfg.classical_variants = {HamiltonianVariant::rel_propgauge, HamiltonianVariant::nonrel_propgauge,
                                  HamiltonianVariant::semirel};
      else if (mode == RunMode::free_sweep)
        cfg.classical_variants.assign(all_hamiltonian_variants.begin(), all_hamiltonian_variants.end());
      else
        cfg.classical_variants = {HamiltonianVariant::semirel};
    }
  }

  // potential
  const std::string default_kind = quantum ? "softcore" : (ensemble_mode ? "coulomb" : "none");
  const std::string kind_text = in.text("potential.kind", default_kind);
  if (auto k = parse_potential_kind(kind_text)) cfg.potential.kind = *k;
  else in.check(false, "potential.kind", "expected none, coulomb or softcore");
  cfg.potential.Z = in.number("potential.Z", 1.0);
  const std::string soft = in.text("potential.softening", "");
  if (soft == "auto") {
    cfg.auto_softening = true;
    in.check(quantum, "potential.softening", "'auto' is only available in tdse/fig1 modes");
  } else if (!soft.empty()) {
    cfg.potential.a = in.number("potential.softening", 0.0);
  } else if (quantum) {
    cfg.potential.a = std::sqrt(2.0);
  }
  cfg.potential.r_min = in.number("potential.r_min", 1e-8);
  in.check(cfg.potential.Z > 0.0, "potential.Z", "must be > 0");
  in.check(cfg.potential.a >= 0.0, "potential.softening", "must be >= 0");
  in.check(cfg.potential.r_min > 0.0, "potential.r_min", "must be > 0");
  if (quantum)
    in.check(cfg.potential.kind == PotentialKind::softcore && (cfg.auto_softening || cfg.potential.a > 0.0),
             "potential.kind", "grid modes need a softcore potential with softening > 0");
  if (ensemble_mode)
    in.check(cfg.potential.kind == PotentialKind::coulomb, "potential.kind", "ctmc modes use the Coulomb potential");

  // trajectory
  if (mode == RunMode::trajectory) {
    cfg.r0 = in.vec3("trajectory.r0", Vec3{});
    cfg.p0 = in.vec3("trajectory.p0", Vec3{});
    cfg.t_end = in.number("trajectory.t_end", 0.0);
    in.check(cfg.t_end >= 0.0, "trajectory.t_end", "must be >= 0 (0 selects the pulse duration)");
  }

  // free-sweep
  if (mode == RunMode::free_sweep) {
    in.require("free_sweep.omega_grid");
    in.require("free_sweep.quiver_grid");
    cfg.omega_grid = in.numbers("free_sweep.omega_grid");
    cfg.quiver_grid = in.numbers("free_sweep.quiver_grid");
    for (double w : cfg.omega_grid) in.check(w > 0.0, "free_sweep.omega_grid", "frequencies must be > 0");
    for (double q : cfg.quiver_grid) in.check(q >= 0.0, "free_sweep.quiver_grid", "quiver parameters must be >= 0");
  }

  // ensemble
  if (ensemble_mode) {
    in.require("ensemble.n_traj");
    cfg.ensemble.n_traj = in.integer<long>("ensemble.n_traj", 1);
    cfg.ensemble.binding_energy = in.number("ensemble.binding_energy", -0.5);
    cfg.ensemble.Z = cfg.potential.Z;
    cfg.coast_factor = in.number("ctmc.coast_factor", 1.0);
    in.check(cfg.ensemble.n_traj >= 1, "ensemble.n_traj", "must be >= 1");
    in.check(cfg.ensemble.binding_energy < 0.0, "ensemble.binding_energy", "must be < 0");
    in.check(cfg.coast_factor >= 0.0, "ctmc.coast_factor", "must be >= 0");
  }
  cfg.ensemble.seed = in.integer<std::uint64_t>("seed", 1);

  if (sweep_mode) {
    const std::string key = mode == RunMode::fig1 ? "tdse.E0_grid" : "ctmc.E0_grid";
    in.require(key);
    cfg.E0_grid = in.numbers(key);
    if (in.has(key)) in.check(!cfg.E0_grid.empty(), key, "must list at least one field strength");
    for (double e : cfg.E0_grid) in.check(e >= 0.0, key, "field strengths must be >= 0");
  }

  cfg.integrator_tol = in.number("tolerance.integrator", 1e-9);
  cfg.eigen_tol = in.number("tolerance.eigen", 1e-10);
  in.check(cfg.integrator_tol > 0.0, "tolerance.integrator", "must be > 0");
  in.check(cfg.eigen_tol > 0.0, "tolerance.eigen", "must be > 0");

  // grid
  if (quantum) {
    cfg.grid.dims = in.integer<int>("grid.dims", 2);
    const int n = in.integer<int>("grid.n", 256);
    const double L = in.number("grid.L", 64.0);
    cfg.grid.n = {n, n};
    cfg.grid.L = {L, L};
    in.check(cfg.grid.dims == 1 || cfg.grid.dims == 2, "grid.dims", "must be 1 or 2");
    in.check(n >= 64 && (n & (n - 1)) == 0, "grid.n", "must be a power of two >= 64");
    in.check(L > 0.0, "grid.L", "must be > 0");
    const std::string dt_text = in.text("tdse.dt", "auto");
    if (dt_text != "auto") cfg.dt = in.number("tdse.dt", 0.0);
    in.check(dt_text == "auto" || cfg.dt > 0.0, "tdse.dt", "must be > 0 or 'auto'");
    cfg.max_quiver_phase = in.number("tdse.max_quiver_phase", 0.1);
    in.check(cfg.max_quiver_phase > 0.0, "tdse.max_quiver_phase", "must be > 0");
    cfg.absorber = in.boolean("tdse.absorber", true);
    cfg.absorber_fraction = in.number("tdse.absorber_fraction", 0.1);
    in.check(cfg.absorber_fraction > 0.0 && cfg.absorber_fraction < 0.5, "tdse.absorber_fraction",
             "must be in (0, 0.5)");
    cfg.convergence_check = in.boolean("tdse.convergence_check", false);
  }

  cfg.output_dir = in.text("output.dir", "results");
  cfg.threads = in.integer<unsigned>("threads", 1u);
  in.check(cfg.threads >= 1, "threads", "must be >= 1");

  in.report_unknown();
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

inline RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
  std::vector<ConfigIssue> issues;
  auto kv = parse_key_values(text, issues);
  apply_overrides(kv, overrides, issues);
  return build_config(kv, std::move(issues));
}

}  // namespace semirel

#endif  // SEMIREL_CONFIG_HPP
