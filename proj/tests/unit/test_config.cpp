#include <semirel/config.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace semirel;

namespace {

std::string read_recipe(const std::string& name) {
  std::ifstream f(std::string(SEMIREL_RECIPE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<ConfigIssue> issues_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<ConfigIssue>& issues, const std::string& key) {
  for (const auto& i : issues)
    if (i.key == key) return true;
  return false;
}

const char* minimal_trajectory = R"(
mode = trajectory
pulse.E0 = 0.1
pulse.omega = 0.5
pulse.n_cycles = 2
)";

}  // namespace

TEST(Config, MinimalTrajectoryGetsDefaults) {
  const RunConfig c = parse_config(minimal_trajectory);
  EXPECT_EQ(c.mode, RunMode::trajectory);
  EXPECT_EQ(c.pulse.E0, 0.1);
  EXPECT_EQ(c.pulse.cep, 0.0);
  EXPECT_EQ(c.pulse.pol, (Vec3{1, 0, 0}));
  EXPECT_EQ(c.pulse.prop, (Vec3{0, 0, 1}));
  EXPECT_EQ(c.constants.c, 137.035999084);
  EXPECT_EQ(c.classical_variants, std::vector<HamiltonianVariant>{HamiltonianVariant::semirel});
  EXPECT_EQ(c.potential.kind, PotentialKind::none);
  EXPECT_EQ(c.t_end, 0.0);
  EXPECT_EQ(c.integrator_tol, 1e-9);
  EXPECT_EQ(c.output_dir, "results");
  EXPECT_EQ(c.threads, 1u);
}

TEST(Config, NegativeOmegaNamesTheKey) {
  const auto issues = issues_of(std::string(minimal_trajectory) + "pulse.omega = -1\n");
  // duplicate key plus the range error
  EXPECT_TRUE(mentions(issues, "pulse.omega"));
  const auto only = issues_of("mode = trajectory\npulse.E0 = 1\npulse.omega = -1\npulse.n_cycles = 2\n");
  ASSERT_EQ(only.size(), 1u);
  EXPECT_EQ(only[0].key, "pulse.omega");
}

TEST(Config, ReportsEveryProblemAtOnce) {
  const auto issues = issues_of(R"(
mode = ctmc
pulse.omega = 50
pulse.n_cycles = 0
pulse.E0 = abc
ensemble.n_traj = 0
pulse.colour = red
this line is not a key value pair
)");
  EXPECT_TRUE(mentions(issues, "pulse.n_cycles"));
  EXPECT_TRUE(mentions(issues, "pulse.E0"));
  EXPECT_TRUE(mentions(issues, "ensemble.n_traj"));
  EXPECT_TRUE(mentions(issues, "pulse.colour"));
  EXPECT_TRUE(mentions(issues, "line 8"));
  EXPECT_GE(issues.size(), 5u);
}

TEST(Config, MissingRequiredKeys) {
  const auto issues = issues_of("pulse.E0 = 1\n");
  EXPECT_TRUE(mentions(issues, "mode"));
  EXPECT_TRUE(mentions(issues, "pulse.omega"));
  EXPECT_TRUE(mentions(issues, "pulse.n_cycles"));
}

TEST(Config, CtmcWithZeroTrajectoriesRejected) {
  const auto issues = issues_of("mode = ctmc\npulse.E0 = 1\npulse.omega = 50\npulse.n_cycles = 15\nensemble.n_traj = 0\n");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].key, "ensemble.n_traj");
}

TEST(Config, UnknownVariantAndMode) {
  EXPECT_TRUE(mentions(issues_of(std::string(minimal_trajectory) + "variants = SEMIREL, DIRAC\n"), "variants"));
  EXPECT_TRUE(mentions(issues_of("mode = plot\npulse.omega = 1\npulse.n_cycles = 1\n"), "mode"));
}

TEST(Config, OverridesReplaceFileValues) {
  const RunConfig c = parse_config(minimal_trajectory, {"pulse.E0=0.3", "seed=99", "output.dir=/tmp/x"});
  EXPECT_EQ(c.pulse.E0, 0.3);
  EXPECT_EQ(c.ensemble.seed, 99u);
  EXPECT_EQ(c.output_dir, "/tmp/x");
  EXPECT_EQ(c.echo.at("pulse.E0"), "0.3");
  EXPECT_TRUE(mentions(issues_of(minimal_trajectory, {"pulse.E0"}), "pulse.E0"));
}

TEST(Config, Fig2RecipeParameters) {
  const RunConfig c = parse_config(read_recipe("fig2.cfg"));
  EXPECT_EQ(c.mode, RunMode::fig2);
  EXPECT_EQ(c.pulse.omega, 50.0);
  EXPECT_EQ(c.pulse.n_cycles, 15);
  EXPECT_EQ(c.classical_variants,
            (std::vector<HamiltonianVariant>{HamiltonianVariant::rel_propgauge, HamiltonianVariant::nonrel_propgauge,
                                             HamiltonianVariant::semirel}));
  EXPECT_EQ(c.ensemble.n_traj, 10000);
  EXPECT_EQ(c.potential.kind, PotentialKind::coulomb);
  EXPECT_EQ(c.E0_grid.size(), 8u);
}

TEST(Config, Fig1RecipeParameters) {
  const RunConfig c = parse_config(read_recipe("fig1.cfg"));
  EXPECT_EQ(c.mode, RunMode::fig1);
  EXPECT_EQ(c.pulse.omega, 3.5);
  EXPECT_EQ(c.pulse.n_cycles, 15);
  EXPECT_EQ(c.E0_grid, (std::vector<double>{50, 70, 90, 110, 130}));
  EXPECT_EQ(c.quantum_variants.size(), 3u);
  EXPECT_TRUE(c.auto_softening);
  EXPECT_EQ(c.grid.dims, 2);
}

TEST(Config, OtherRecipesParse) {
  EXPECT_NO_THROW(parse_config(read_recipe("free_sweep.cfg")));
  EXPECT_NO_THROW(parse_config(read_recipe("trajectory.cfg")));
}

TEST(Config, Fig1NeedsAllQuantumVariants) {
  EXPECT_TRUE(mentions(issues_of(read_recipe("fig1.cfg"), {"variants=NR, SR_LEADING"}), "variants"));
}

TEST(Config, GridModesNeedSoftCore) {
  EXPECT_TRUE(mentions(issues_of(read_recipe("fig1.cfg"), {"potential.kind=coulomb"}), "potential.kind"));
  EXPECT_TRUE(mentions(issues_of(read_recipe("fig1.cfg"), {"grid.n=100"}), "grid.n"));
}
