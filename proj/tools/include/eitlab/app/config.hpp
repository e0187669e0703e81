#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eitlab/grid.hpp"
#include "eitlab/medium.hpp"
#include "eitlab/schedule.hpp"

namespace eitlab::app {

enum class Scenario {
  singlemode,
  propagate_mb,
  propagate_polariton,
  propagate_both,
  spectra,
  bounds,
};

enum class Propagator { ideal, nonadiabatic };

std::string to_string(Scenario s);

struct PulseConfig {
  enum class Shape { gaussian_z, gaussian_t };
  enum class Injection { mapped, boundary };
  Shape shape = Shape::gaussian_z;
  /// exp(-((x - center) / width)^2) with x = z or t.
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
  Injection injection = Injection::mapped;
  double z_source = 0.0;
};

struct OutputConfig {
  std::string dir = "out";
  std::size_t snapshot_stride = 0;
  std::vector<double> snapshot_times;
  std::vector<double> probe_planes;
  /// Pulse displacements c int cos^2 theta at which energy ratios are reported.
  std::vector<double> displacement_marks;
  std::optional<std::pair<double, double>> compare_window;
};

struct SinglemodeConfig {
  int atoms = 1;
  int n_max = 1;
  int photons = 1;
  double g = 1.0;
  std::vector<double> durations;
  double cot_start = 100.0;
};

struct SpectraConfig {
  std::vector<double> group_velocities;
  double depth = 0.0;
  double delta_max = 0.0;
  std::size_t samples = 401;
  double omega_ab = 1e5;
  /// Reflection table spans |omega - omega_ab| <= span * (v/c) omega_ab.
  double reflection_span = 4.0;
};

struct BoundsConfig {
  double alpha = 0.0;
  double gamma_bc = 0.0;
};

/// Fully resolved run description. Everything is in gamma = 1, c = 1 units.
struct RunConfig {
  std::string name;
  Scenario scenario = Scenario::propagate_polariton;
  std::optional<MediumParams> medium;
  std::optional<ControlSchedule> schedule;
  std::optional<Grid> grid;
  std::optional<PulseConfig> pulse;
  Propagator propagator = Propagator::nonadiabatic;
  OutputConfig output;
  std::optional<SinglemodeConfig> singlemode;
  std::optional<SpectraConfig> spectra;
  std::optional<BoundsConfig> bounds;
  /// "section.key = value" lines of the source configuration, in order.
  std::vector<std::string> echo;
};

/// Parses INI text (see README for the grammar). Throws ValidationError naming
/// every missing or malformed key. `base_dir` resolves relative file paths.
RunConfig parse_config(const std::string& text, const std::string& name = "config",
                       const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Names of the built-in presets.
std::vector<std::string> preset_names();
/// INI text of a preset; throws ValidationError for unknown names.
std::string preset_text(const std::string& name);
RunConfig preset(const std::string& name);

/// Replaces the propagation scenario according to --solver {mb, polariton, both}.
void apply_solver(RunConfig& config, const std::string& solver);

}  // namespace eitlab::app
