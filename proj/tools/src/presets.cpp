#include <map>

#include "eitlab/app/config.hpp"
#include "eitlab/errors.hpp"

namespace eitlab::app {
namespace {

// Stop and release: polariton with envelope exp(-(z/10)^2), stopped and
// released by cot(theta) = 100 (1 - 0.5 tanh[0.1 (t-15)] + 0.5 tanh[0.1 (t-125)]).
// g2N = 100 and L = 100 (alpha = 1e4) keep the optional Maxwell-Bloch run deep
// in the adiabatic regime.
constexpr const char* kFig3 = R"(scenario = propagate-polariton

[medium]
g2N = 100
length = 100

[schedule]
family = fig3

[grid]
z_min = -64
z_max = 192
nz = 512
t_final = 200

[pulse]
shape = gaussian-z
center = 0
width = 10

[polariton]
propagator = ideal

[output]
snapshot_times = 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150, 160, 170, 180, 190, 200
)";

// Transmission windows for a time-dependent group velocity,
// alpha = 20, g2N / gamma^2 = 10; frequencies also reported in units of
// omega_0 = g2N / gamma.
constexpr const char* kFig4 = R"(scenario = spectra

[medium]
g2N = 10
alpha = 20

[spectra]
group_velocities = 0.08, 0.04, 0.02, 0.01
delta_max = 0.6
samples = 601
)";

// Reflection coefficient at the entrance face versus probe detuning.
constexpr const char* kFig5 = R"(scenario = spectra

[medium]
g2N = 10
alpha = 20

[spectra]
group_velocities = 0.1, 0.01
delta_max = 0.6
samples = 601
omega_ab = 1e5
)";

// Deceleration and re-acceleration of exp[-(t-500)^2/200^2] with
// cot(theta) = 0.363 (1 - (2/pi) arccot[5 (1 - 0.5 tanh[0.005 (t-2000)]
// + 0.5 tanh[0.005 (t-3200)])]), g2N / gamma^2 = 2.5, alpha = 625, c = 1.
constexpr const char* kFig6 = R"(scenario = propagate-both

[medium]
g2N = 2.5
alpha = 625

[schedule]
family = fig6

[grid]
z_min = -150
z_max = 350
nz = 1024
dt = 0.2
t_final = 4000

[pulse]
shape = gaussian-t
center = 500
width = 200
injection = mapped

[output]
snapshot_times = 600, 800, 1000, 1200, 1400, 1600, 1800, 2000, 2200, 2400, 2800, 3000, 3200, 3400, 3800, 4000
displacement_marks = 250
compare_window = 0, 350
)";

const std::map<std::string, const char*>& table() {
  static const std::map<std::string, const char*> t = {
      {"fig3", kFig3}, {"fig4", kFig4}, {"fig5", kFig5}, {"fig6", kFig6}};
  return t;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : table()) out.push_back(k);
  return out;
}

std::string preset_text(const std::string& name) {
  const auto it = table().find(name);
  if (it == table().end()) {
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw ValidationError("unknown preset '" + name + "' (known:" + known + ")");
  }
  return it->second;
}

RunConfig preset(const std::string& name) {
  RunConfig cfg = parse_config(preset_text(name), name);
  cfg.echo.insert(cfg.echo.begin(), "preset = " + name);
  return cfg;
}

}  // namespace eitlab::app
