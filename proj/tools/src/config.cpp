#include "eitlab/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "eitlab/errors.hpp"
#include "eitlab/mbsolver.hpp"

namespace eitlab::app {
namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_inline_comment(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i] == ';' || s[i] == '#') && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t'))
      return trim(s.substr(0, i));
  }
  return trim(s);
}

double parse_number(const std::string& raw, bool& ok) {
  const std::string s = trim(raw);
  ok = true;
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) ok = false;
    return v;
  } catch (const std::exception&) {
    ok = false;
    return 0.0;
  }
}

/// Unit conversion into gamma = 1, c = 1.
struct Units {
  double gamma = 1.0;  // the decay rate expressed in the file's rate unit
  double c = 1.0;      // the speed of light in the file's length / time units
  double rate(double x) const { return x / gamma; }
  double rate2(double x) const { return x / (gamma * gamma); }
  double time(double x) const { return x * gamma; }
  double length(double x) const { return x * gamma / c; }
  double wavenumber(double x) const { return x * c / gamma; }
};

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  bool has(const std::string& key) const { return tree_.get_optional<std::string>(path(key)).has_value(); }
  bool has_section(const std::string& s) const { return tree_.get_child_optional(s).has_value(); }

  std::optional<std::string> text(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(path(key));
    if (!v) return std::nullopt;
    return strip_inline_comment(*v);
  }

  std::string require_text(const std::string& key) {
    auto v = text(key);
    if (!v || v->empty()) {
      missing_.push_back(key);
      return "";
    }
    return *v;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    auto v = text(key);
    if (!v || v->empty()) {
      if (fallback) return *fallback;
      missing_.push_back(key);
      return std::numeric_limits<double>::quiet_NaN();
    }
    bool ok = false;
    const double x = parse_number(*v, ok);
    if (!ok) malformed_.push_back(key + " (not a number: '" + *v + "')");
    return x;
  }

  std::vector<double> numbers(const std::string& key, bool required) {
    std::vector<double> out;
    auto v = text(key);
    if (!v || v->empty()) {
      if (required) missing_.push_back(key);
      return out;
    }
    std::string item;
    std::stringstream ss(*v);
    while (std::getline(ss, item, ',')) {
      if (trim(item).empty()) continue;
      bool ok = false;
      out.push_back(parse_number(item, ok));
      if (!ok) malformed_.push_back(key + " (not a number list: '" + *v + "')");
    }
    return out;
  }

  void missing(const std::string& key) { missing_.push_back(key); }
  void malformed(const std::string& what) { malformed_.push_back(what); }

  void raise_if_errors() const {
    if (missing_.empty() && malformed_.empty()) return;
    std::ostringstream msg;
    msg << "invalid configuration:";
    if (!missing_.empty()) {
      msg << " missing keys:";
      for (const auto& k : missing_) msg << ' ' << k;
      msg << ';';
    }
    for (const auto& m : malformed_) msg << " malformed " << m << ';';
    throw ValidationError(msg.str());
  }

  bool ok() const { return missing_.empty() && malformed_.empty(); }

 private:
  static pt::ptree::path_type path(const std::string& key) { return pt::ptree::path_type(key, '.'); }
  const pt::ptree& tree_;
  std::vector<std::string> missing_;
  std::vector<std::string> malformed_;
};

std::optional<Scenario> parse_scenario(const std::string& s) {
  if (s == "singlemode") return Scenario::singlemode;
  if (s == "propagate-mb") return Scenario::propagate_mb;
  if (s == "propagate-polariton") return Scenario::propagate_polariton;
  if (s == "propagate-both") return Scenario::propagate_both;
  if (s == "spectra") return Scenario::spectra;
  if (s == "bounds") return Scenario::bounds;
  return std::nullopt;
}

bool is_propagation(Scenario s) {
  return s == Scenario::propagate_mb || s == Scenario::propagate_polariton ||
         s == Scenario::propagate_both;
}

ControlSchedule read_tabulated(const std::string& file, const Units& u) {
  std::ifstream in(file);
  if (!in) throw ValidationError("schedule.file: cannot open '" + file + "'");
  std::vector<double> t, cot;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_inline_comment(line);
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a >> b)) throw ValidationError("schedule.file: malformed line '" + line + "'");
    t.push_back(u.time(a));
    cot.push_back(b);
  }
  return ControlSchedule::tabulated(std::move(t), std::move(cot));
}

std::optional<MediumParams> read_medium(Reader& r, const Units& u) {
  const double g2N = r.number("medium.g2N");
  const double gamma = r.number("medium.gamma", 1.0 * u.gamma);
  const bool has_length = r.has("medium.length"), has_alpha = r.has("medium.alpha");
  if (!has_length && !has_alpha) r.missing("medium.length (or medium.alpha)");
  if (has_length && has_alpha) r.malformed("medium: give either length or alpha, not both");
  const double length = has_length ? r.number("medium.length") : 0.0;
  const double alpha = has_alpha ? r.number("medium.alpha") : 0.0;
  const double gamma_ba = r.number("medium.gamma_ba", gamma);
  const double gamma0 = r.number("medium.gamma0", 0.0);
  const double dk = r.number("medium.delta_k", 0.0);
  const double atoms = r.number("medium.atom_number", 1e8);
  if (!r.ok()) return std::nullopt;
  const double g = u.rate2(g2N);
  MediumParams m = has_alpha ? MediumParams::with_opacity(g, alpha, u.rate(gamma))
                             : MediumParams(g, u.rate(gamma), u.length(length));
  return m.with_gamma_ba(u.rate(gamma_ba))
      .with_gamma0(u.rate(gamma0))
      .with_delta_k(u.wavenumber(dk))
      .with_atom_number(atoms);
}

std::optional<ControlSchedule> read_schedule(Reader& r, const Units& u,
                                             const std::optional<MediumParams>& medium,
                                             const std::string& base_dir) {
  const std::string family = r.require_text("schedule.family");
  if (family.empty()) return std::nullopt;
  const double inf = std::numeric_limits<double>::infinity();
  if (family == "constant") {
    if (r.has("schedule.omega")) {
      const double omega = r.number("schedule.omega");
      if (!r.ok() || !medium) return std::nullopt;
      return ControlSchedule::constant_rabi(u.rate(omega), *medium);
    }
    const double cot = r.number("schedule.cot");
    if (!r.ok()) return std::nullopt;
    return ControlSchedule::constant_cot(cot);
  }
  if (family == "tanh-ramp") {
    TanhRamp p;
    p.a = r.number("schedule.a");
    p.b = r.number("schedule.b", 0.5);
    p.c = u.rate(r.number("schedule.c"));
    p.t1 = u.time(r.number("schedule.t1", -inf));
    p.t2 = u.time(r.number("schedule.t2", inf));
    if (!r.ok()) return std::nullopt;
    return ControlSchedule::tanh_ramp(p);
  }
  if (family == "arccot-tanh") {
    ArccotTanh p;
    p.a = r.number("schedule.a");
    p.s = r.number("schedule.s");
    p.b = r.number("schedule.b", 0.5);
    p.c = u.rate(r.number("schedule.c"));
    p.t1 = u.time(r.number("schedule.t1"));
    p.t2 = u.time(r.number("schedule.t2"));
    if (!r.ok()) return std::nullopt;
    return ControlSchedule::arccot_tanh(p);
  }
  if (family == "tabulated") {
    const std::string file = r.require_text("schedule.file");
    if (!r.ok()) return std::nullopt;
    std::filesystem::path p(file);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    return read_tabulated(p.string(), u);
  }
  if (family == "storage" || family == "retrieval") {
    const double duration = u.time(r.number("schedule.duration"));
    const double cot = r.number("schedule.cot_limit", 100.0);
    if (!r.ok()) return std::nullopt;
    return family == "storage" ? ControlSchedule::storage_ramp(duration, cot)
                               : ControlSchedule::retrieval_ramp(duration, cot);
  }
  if (family == "fig3") return presets::stop_and_release_fig3();
  if (family == "fig6") return presets::stop_and_release_fig6();
  r.malformed("schedule.family (unknown family '" + family +
              "'; expected constant, tanh-ramp, arccot-tanh, tabulated, storage, retrieval, "
              "fig3 or fig6)");
  return std::nullopt;
}

std::optional<PulseConfig> read_pulse(Reader& r, const Units& u) {
  const std::string shape = r.require_text("pulse.shape");
  PulseConfig p;
  if (shape == "gaussian-z") {
    p.shape = PulseConfig::Shape::gaussian_z;
    p.center = u.length(r.number("pulse.center"));
    p.width = u.length(r.number("pulse.width"));
  } else if (shape == "gaussian-t") {
    p.shape = PulseConfig::Shape::gaussian_t;
    p.center = u.time(r.number("pulse.center"));
    p.width = u.time(r.number("pulse.width"));
    const std::string inj = r.text("pulse.injection").value_or("mapped");
    if (inj == "mapped") {
      p.injection = PulseConfig::Injection::mapped;
    } else if (inj == "boundary") {
      p.injection = PulseConfig::Injection::boundary;
      p.z_source = u.length(r.number("pulse.z_source", 0.0));
    } else {
      r.malformed("pulse.injection (expected mapped or boundary)");
    }
  } else if (!shape.empty()) {
    r.malformed("pulse.shape (expected gaussian-z or gaussian-t)");
  }
  p.amplitude = r.number("pulse.amplitude", 1.0);
  if (!r.ok()) return std::nullopt;
  if (!(p.width > 0.0)) throw ValidationError("pulse.width must be > 0");
  return p;
}

std::optional<Grid> read_grid(Reader& r, const Units& u, const std::optional<MediumParams>& medium,
                              const std::optional<ControlSchedule>& schedule) {
  const double z_min = u.length(r.number("grid.z_min"));
  const double z_max = u.length(r.number("grid.z_max"));
  const double nz = r.number("grid.nz");
  const double t_final = u.time(r.number("grid.t_final"));
  const bool auto_dt = !r.has("grid.dt") || r.text("grid.dt").value_or("") == "auto";
  const double dt = auto_dt ? 0.0 : u.time(r.number("grid.dt"));
  if (!r.ok()) return std::nullopt;
  if (!(nz >= 1.0) || nz != std::floor(nz)) throw ValidationError("grid.nz must be a positive integer");
  const auto n = static_cast<std::size_t>(nz);
  if (!auto_dt) return Grid(z_min, z_max, n, dt, t_final);
  if (!medium || !schedule) return std::nullopt;
  const double dz = (z_max - z_min) / nz;
  const auto [lo, hi] = schedule->domain();
  const double t1 = std::min(hi, t_final);
  const double stable = mb::stable_step(*medium, *schedule, dz, std::max(lo, 0.0), t1);
  return Grid(z_min, z_max, n, std::min(0.5 * dz / kSpeedOfLight, stable), t_final);
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::singlemode: return "singlemode";
    case Scenario::propagate_mb: return "propagate-mb";
    case Scenario::propagate_polariton: return "propagate-polariton";
    case Scenario::propagate_both: return "propagate-both";
    case Scenario::spectra: return "spectra";
    case Scenario::bounds: return "bounds";
  }
  return "unknown";
}

RunConfig parse_config(const std::string& text, const std::string& name,
                       const std::string& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config syntax error: ") + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
  }
  Reader r(tree);
  RunConfig cfg;
  cfg.name = name;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      cfg.echo.push_back(key + " = " + strip_inline_comment(node.data()));
    } else {
      for (const auto& [sub, leaf] : node)
        cfg.echo.push_back(key + "." + sub + " = " + strip_inline_comment(leaf.data()));
    }
  }

  Units u;
  u.gamma = r.number("units.gamma", 1.0);
  u.c = r.number("units.c", 1.0);
  if (!(u.gamma > 0.0) || !(u.c > 0.0)) r.malformed("units (gamma and c must be > 0)");

  const std::string scen = r.require_text("scenario");
  std::optional<Scenario> scenario;
  if (!scen.empty()) {
    scenario = parse_scenario(scen);
    if (!scenario)
      r.malformed("scenario (unknown '" + scen +
                  "'; expected singlemode, propagate-mb, propagate-polariton, propagate-both, "
                  "spectra or bounds)");
  }
  // Without a scenario the propagation keys are the ones reported as missing.
  const Scenario s = scenario.value_or(Scenario::propagate_both);
  cfg.scenario = s;

  OutputConfig& out = cfg.output;
  out.dir = r.text("output.dir").value_or("out");
  out.snapshot_stride = static_cast<std::size_t>(r.number("output.snapshot_stride", 0.0));
  for (double t : r.numbers("output.snapshot_times", false)) out.snapshot_times.push_back(u.time(t));
  for (double z : r.numbers("output.probe_planes", false)) out.probe_planes.push_back(u.length(z));
  for (double z : r.numbers("output.displacement_marks", false))
    out.displacement_marks.push_back(u.length(z));
  const auto window = r.numbers("output.compare_window", false);
  if (window.size() == 2) {
    out.compare_window = std::make_pair(u.length(window[0]), u.length(window[1]));
  } else if (!window.empty()) {
    r.malformed("output.compare_window (expected 'z_lo, z_hi')");
  }

  if (is_propagation(s) || s == Scenario::spectra) cfg.medium = read_medium(r, u);
  if (is_propagation(s)) {
    cfg.schedule = read_schedule(r, u, cfg.medium, base_dir);
    cfg.pulse = read_pulse(r, u);
    cfg.grid = read_grid(r, u, cfg.medium, cfg.schedule);
    const std::string prop = r.text("polariton.propagator").value_or("nonadiabatic");
    if (prop == "ideal") {
      cfg.propagator = Propagator::ideal;
    } else if (prop == "nonadiabatic") {
      cfg.propagator = Propagator::nonadiabatic;
    } else {
      r.malformed("polariton.propagator (expected ideal or nonadiabatic)");
    }
  }
  if (s == Scenario::singlemode) {
    SinglemodeConfig sm;
    sm.atoms = static_cast<int>(r.number("singlemode.atoms"));
    sm.n_max = static_cast<int>(r.number("singlemode.n_max"));
    sm.photons = static_cast<int>(r.number("singlemode.photons", 1.0));
    sm.g = u.rate(r.number("singlemode.g"));
    for (double d : r.numbers("singlemode.durations", true)) sm.durations.push_back(u.time(d));
    sm.cot_start = r.number("singlemode.cot_start", 100.0);
    cfg.singlemode = sm;
  }
  if (s == Scenario::spectra) {
    SpectraConfig sp;
    for (double v : r.numbers("spectra.group_velocities", true)) sp.group_velocities.push_back(v / u.c);
    const bool has_depth = r.has("spectra.depth");
    sp.depth = has_depth ? u.length(r.number("spectra.depth")) : 0.0;
    sp.delta_max = u.rate(r.number("spectra.delta_max"));
    sp.samples = static_cast<std::size_t>(r.number("spectra.samples", 401.0));
    sp.omega_ab = u.rate(r.number("spectra.omega_ab", 1e5 * u.gamma));
    sp.reflection_span = r.number("spectra.reflection_span", 4.0);
    if (!has_depth && cfg.medium) sp.depth = cfg.medium->length();
    cfg.spectra = sp;
  }
  if (s == Scenario::bounds) {
    BoundsConfig b;
    b.alpha = r.number("bounds.alpha");
    b.gamma_bc = u.rate(r.number("bounds.gamma_bc", 0.0));
    cfg.bounds = b;
  }
  r.raise_if_errors();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::filesystem::path p(path);
  return parse_config(ss.str(), p.stem().string(), p.parent_path().empty() ? "." : p.parent_path().string());
}

void apply_solver(RunConfig& config, const std::string& solver) {
  if (!is_propagation(config.scenario))
    throw ValidationError("--solver applies only to propagation scenarios");
  if (solver == "mb") {
    config.scenario = Scenario::propagate_mb;
  } else if (solver == "polariton") {
    config.scenario = Scenario::propagate_polariton;
  } else if (solver == "both") {
    config.scenario = Scenario::propagate_both;
  } else {
    throw ValidationError("--solver must be mb, polariton or both");
  }
  config.echo.push_back("scenario = " + to_string(config.scenario) + "  (--solver)");
}

}  // namespace eitlab::app
