#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "eitlab/app/config.hpp"
#include "eitlab/app/run.hpp"
#include "eitlab/errors.hpp"
#include "eitlab/schedule.hpp"

namespace fs = std::filesystem;
using namespace eitlab;
using namespace eitlab::app;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("eitlab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(EITLAB_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string validation_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

const char* kSmallPropagation = R"(scenario = propagate-both

[medium]
g2N = 10
length = 50

[schedule]
family = constant
cot = 1

[grid]
z_min = -32
z_max = 96
nz = 128
dt = 0.05
t_final = 40

[pulse]
shape = gaussian-z
center = 0
width = 6

[output]
snapshot_times = 10, 20
probe_planes = 5
)";

}  // namespace

TEST(Config, EmptyConfigNamesEveryMissingKey) {
  const std::string msg = validation_message("");
  ASSERT_FALSE(msg.empty());
  for (const char* key : {"scenario", "medium.g2N", "medium.length", "schedule.family", "pulse.shape",
                          "grid.z_min", "grid.z_max", "grid.nz", "grid.t_final"})
    EXPECT_NE(msg.find(key), std::string::npos) << key << " not in: " << msg;
}

TEST(Config, ScenarioSpecificKeysAreRequired) {
  const std::string sm = validation_message("scenario = singlemode\n[singlemode]\natoms = 2\n");
  for (const char* key : {"singlemode.n_max", "singlemode.g", "singlemode.durations"})
    EXPECT_NE(sm.find(key), std::string::npos) << key;
  EXPECT_EQ(sm.find("medium.g2N"), std::string::npos);
  const std::string b = validation_message("scenario = bounds\n");
  EXPECT_NE(b.find("bounds.alpha"), std::string::npos);
}

TEST(Config, MalformedValuesAreNamed) {
  const std::string msg = validation_message(
      "scenario = bounds\n[bounds]\nalpha = lots\n");
  EXPECT_NE(msg.find("bounds.alpha"), std::string::npos);
  EXPECT_NE(validation_message("scenario = teleport\n").find("teleport"), std::string::npos);
  const std::string both = validation_message(
      "scenario = spectra\n[medium]\ng2N = 1\nlength = 2\nalpha = 3\n[spectra]\n"
      "group_velocities = 0.1\ndelta_max = 1\n");
  EXPECT_NE(both.find("either length or alpha"), std::string::npos);
}

TEST(Config, InlineCommentsAreStripped) {
  const RunConfig cfg = parse_config(
      "scenario = bounds   ; what to run\n[bounds]\nalpha = 400 # opacity\ngamma_bc = 0\n");
  EXPECT_EQ(cfg.scenario, Scenario::bounds);
  EXPECT_DOUBLE_EQ(cfg.bounds->alpha, 400.0);
}

TEST(Config, UnitsBlockConvertsToNaturalUnits) {
  const RunConfig cfg = parse_config(R"(scenario = propagate-polariton
[units]
gamma = 2
c = 4
[medium]
g2N = 8
length = 20
gamma0 = 0.5
[schedule]
family = tanh-ramp
a = 1
c = 0.2
t1 = 10
[grid]
z_min = -40
z_max = 40
nz = 64
dt = 0.1
t_final = 30
[pulse]
shape = gaussian-t
center = 6
width = 3
)");
  EXPECT_DOUBLE_EQ(cfg.medium->g2N(), 2.0);
  EXPECT_DOUBLE_EQ(cfg.medium->length(), 10.0);
  EXPECT_DOUBLE_EQ(cfg.medium->gamma0(), 0.25);
  EXPECT_DOUBLE_EQ(cfg.grid->z_min(), -20.0);
  EXPECT_DOUBLE_EQ(cfg.grid->step(), 0.2);
  EXPECT_DOUBLE_EQ(cfg.grid->t_final(), 60.0);
  EXPECT_DOUBLE_EQ(cfg.pulse->center, 12.0);
  EXPECT_DOUBLE_EQ(cfg.pulse->width, 6.0);
  EXPECT_NEAR(cfg.schedule->cot_theta(20.0), 0.5, 1e-15);
  const auto& ramp = std::get<TanhRamp>(cfg.schedule->representation());
  EXPECT_DOUBLE_EQ(ramp.c, 0.1);
  EXPECT_DOUBLE_EQ(ramp.t1, 20.0);
}

TEST(Config, AutomaticStepRespectsStability) {
  RunConfig cfg = parse_config(std::string(kSmallPropagation));
  const double fixed = cfg.grid->step();
  std::string text = kSmallPropagation;
  text.replace(text.find("dt = 0.05"), 9, "dt = auto");
  cfg = parse_config(text);
  EXPECT_GT(cfg.grid->step(), 0.0);
  EXPECT_LE(cfg.grid->step(), 0.5 * cfg.grid->dz());
  EXPECT_NE(cfg.grid->step(), fixed);
}

TEST(Presets, NamesAndUnknownPreset) {
  EXPECT_EQ(preset_names(), (std::vector<std::string>{"fig3", "fig4", "fig5", "fig6"}));
  EXPECT_THROW(preset("fig7"), ValidationError);
}

TEST(Presets, SlowdownPresetMedium) {
  const RunConfig cfg = preset("fig6");
  EXPECT_EQ(cfg.scenario, Scenario::propagate_both);
  EXPECT_NEAR(cfg.medium->alpha(), 625.0, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.medium->g2N(), 2.5);
  EXPECT_EQ(cfg.pulse->shape, PulseConfig::Shape::gaussian_t);
  EXPECT_DOUBLE_EQ(cfg.pulse->center, 500.0);
  EXPECT_DOUBLE_EQ(cfg.pulse->width, 200.0);
}

TEST(Presets, WindowPresetMedium) {
  const RunConfig cfg = preset("fig4");
  EXPECT_EQ(cfg.scenario, Scenario::spectra);
  EXPECT_NEAR(cfg.medium->alpha(), 20.0, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.medium->g2N(), 10.0);
  EXPECT_DOUBLE_EQ(cfg.spectra->depth, cfg.medium->length());
}

TEST(Presets, StopReleaseEnvelope) {
  const RunConfig cfg = preset("fig3");
  EXPECT_EQ(cfg.pulse->shape, PulseConfig::Shape::gaussian_z);
  EXPECT_DOUBLE_EQ(cfg.pulse->width, 10.0);
  EXPECT_DOUBLE_EQ(cfg.pulse->center, 0.0);
  EXPECT_EQ(cfg.propagator, Propagator::ideal);
  EXPECT_NEAR(cfg.schedule->cot_theta(0.0),
              presets::stop_and_release_fig3().cot_theta(0.0), 0.0);
}

TEST(Presets, EveryPresetParses) {
  for (const auto& name : preset_names()) {
    const RunConfig cfg = preset(name);
    ASSERT_FALSE(cfg.echo.empty());
    EXPECT_EQ(cfg.echo.front(), "preset = " + name);
  }
}

TEST(Presets, SolverOverride) {
  RunConfig cfg = preset("fig6");
  apply_solver(cfg, "mb");
  EXPECT_EQ(cfg.scenario, Scenario::propagate_mb);
  RunConfig spectra = preset("fig4");
  EXPECT_THROW(apply_solver(spectra, "mb"), ValidationError);
}

TEST(Run, OutputsAreByteIdenticalAcrossRuns) {
  const fs::path root = scratch("determinism");
  for (const auto& cfg : {parse_config(kSmallPropagation, "small"), preset("fig4")}) {
    execute(cfg, (root / (cfg.name + "_a")).string());
    execute(cfg, (root / (cfg.name + "_b")).string());
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(root / (cfg.name + "_a"))) {
      if (!e.is_regular_file()) continue;
      const fs::path twin = root / (cfg.name + "_b") / fs::relative(e.path(), root / (cfg.name + "_a"));
      ASSERT_TRUE(fs::exists(twin)) << twin;
      EXPECT_EQ(slurp(e.path()), slurp(twin)) << e.path();
      ++files;
    }
    EXPECT_GT(files, 2u);
  }
}

TEST(Run, EveryCsvEchoesTheResolvedConfig) {
  const fs::path dir = scratch("echo");
  const RunConfig cfg = parse_config(kSmallPropagation, "small");
  execute(cfg, dir.string());
  std::size_t csvs = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    const std::string text = slurp(e.path());
    EXPECT_EQ(text.rfind("# eitlab propagate-both run 'small'", 0), 0u) << e.path();
    for (const auto& line : cfg.echo) EXPECT_NE(text.find("# " + line + "\n"), std::string::npos) << line;
    ++csvs;
  }
  EXPECT_GE(csvs, 6u);
  const std::string summary = slurp(dir / "summary.json");
  EXPECT_NE(summary.find("\"medium.g2N = 10\""), std::string::npos);
  EXPECT_NE(summary.find("\"adiabaticity\""), std::string::npos);
  EXPECT_NE(summary.find("\"probes\""), std::string::npos);
}

TEST(Cli, EmptyConfigExitsWithValidationCode) {
  const fs::path dir = scratch("empty");
  write(dir / "empty.ini", "");
  EXPECT_EQ(cli("--config " + (dir / "empty.ini").string(), dir / "log.txt"), 2);
  const std::string log = slurp(dir / "log.txt");
  EXPECT_NE(log.find("medium.g2N"), std::string::npos);
  EXPECT_NE(log.find("grid.t_final"), std::string::npos);
}

TEST(Cli, UsageErrorsExitWithValidationCode) {
  const fs::path dir = scratch("usage");
  EXPECT_EQ(cli("", dir / "log.txt"), 2);
  EXPECT_EQ(cli("--preset nope", dir / "log.txt"), 2);
  EXPECT_EQ(cli("--preset fig4 --solver mb", dir / "log.txt"), 2);
  EXPECT_EQ(cli("--preset fig6 --solver sideways", dir / "log.txt"), 2);
  EXPECT_EQ(cli("--list-presets", dir / "log.txt"), 0);
  EXPECT_EQ(slurp(dir / "log.txt"), "fig3\nfig4\nfig5\nfig6\n");
}

TEST(Cli, WrapHazardExitCode) {
  const fs::path dir = scratch("wrap");
  write(dir / "wrap.ini", R"(scenario = propagate-polariton
[medium]
g2N = 1
length = 40
[schedule]
family = constant
cot = 1
[grid]
z_min = -20
z_max = 20
nz = 64
dt = 0.25
t_final = 100
[pulse]
shape = gaussian-z
center = 0
width = 3
[polariton]
propagator = ideal
)");
  EXPECT_EQ(cli("--config " + (dir / "wrap.ini").string() + " --out " + (dir / "out").string(),
                dir / "log.txt"),
            4);
}

TEST(Cli, SparseTableExitsWithNumericalCode) {
  const fs::path dir = scratch("sparse");
  const auto src = presets::stop_and_release_fig6();
  std::ostringstream table;
  for (int i = 0; i < 9; ++i) table << 500.0 * i << ", " << src.cot_theta(500.0 * i) << '\n';
  write(dir / "sparse.csv", table.str());
  write(dir / "sparse.ini", R"(scenario = propagate-polariton
[medium]
g2N = 2.5
alpha = 625
[schedule]
family = tabulated
file = sparse.csv
[grid]
z_min = -150
z_max = 350
nz = 256
dt = 0.5
t_final = 4000
[pulse]
shape = gaussian-t
center = 500
width = 200
)");
  EXPECT_EQ(cli("--config " + (dir / "sparse.ini").string() + " --out " + (dir / "out").string(),
                dir / "log.txt"),
            3);
  EXPECT_NE(slurp(dir / "log.txt").find("too sparse"), std::string::npos);
}

TEST(Cli, SweepWritesOneDirectoryPerConfig) {
  const fs::path dir = scratch("sweep");
  write(dir / "small.ini", kSmallPropagation);
  write(dir / "bounds.ini", "scenario = bounds\n[bounds]\nalpha = 1e4\n");
  EXPECT_EQ(cli("--config " + (dir / "small.ini").string() + " --config " + (dir / "bounds.ini").string() +
                    " --preset fig5 --workers 3 --out " + (dir / "out").string(),
                dir / "log.txt"),
            0);
  for (const char* name : {"small", "bounds", "fig5"})
    EXPECT_TRUE(fs::exists(dir / "out" / name / "summary.json")) << name;
  EXPECT_NE(slurp(dir / "out" / "bounds" / "summary.json").find("\"delay_ratio\": 100.0"),
            std::string::npos);
}

TEST(Cli, ExampleConfigsRun) {
  const fs::path dir = scratch("examples");
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(EITLAB_CONFIG_DIR)) {
    if (e.path().extension() != ".ini") continue;
    const std::string stem = e.path().stem().string();
    EXPECT_EQ(cli("--config " + e.path().string() + " --out " + (dir / stem).string(),
                  dir / (stem + ".log")),
              0)
        << stem << ": " << slurp(dir / (stem + ".log"));
    EXPECT_TRUE(fs::exists(dir / stem / "summary.json")) << stem;
    ++n;
  }
  EXPECT_GE(n, 5u);
}
