#include "eitlab/app/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "eitlab/errors.hpp"
#include "eitlab/mbsolver.hpp"
#include "eitlab/polariton.hpp"
#include "eitlab/singlemode.hpp"
#include "eitlab/spectra.hpp"

namespace eitlab::app {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using cd = std::complex<double>;

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const RunConfig& cfg, const std::vector<std::string>& columns,
            const std::vector<std::string>& notes = {})
      : out_(path) {
    if (!out_) throw Error("cannot write " + path.string());
    out_ << "# eitlab " << to_string(cfg.scenario) << " run '" << cfg.name << "'\n";
    for (const auto& line : cfg.echo) out_ << "# " << line << '\n';
    for (const auto& n : notes) out_ << "# " << n << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line += ',';
      line += fmt::format("{:.12e}", values[i]);
    }
    out_ << line << '\n';
  }

 private:
  std::ofstream out_;
};

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json config_json(const RunConfig& cfg) {
  json c = json::object();
  c["name"] = cfg.name;
  c["scenario"] = to_string(cfg.scenario);
  c["resolved"] = cfg.echo;
  return c;
}

std::string snapshot_name(const char* prefix, std::size_t i) {
  return fmt::format("{}_{:04d}.csv", prefix, i);
}

// Time at which the pulse displacement c int_0^t cos^2 theta reaches x.
std::optional<double> time_for_displacement(const ControlSchedule& s, double x, double t_final) {
  auto f = [&](double t) { return displacement(s, 0.0, t) - x; };
  if (f(t_final) < 0.0 || x <= 0.0) return std::nullopt;
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, 0.0, t_final,
                                                   boost::math::tools::eps_tolerance<double>(45), iters);
  return 0.5 * (r.first + r.second);
}

void append_unique(std::vector<double>& v, double t) {
  for (double x : v)
    if (std::abs(x - t) <= 1e-9 * std::max(1.0, std::abs(t))) return;
  v.push_back(t);
}

json adiabaticity_json(const AdiabaticityReport& r) {
  return {{"pulse_length", r.pulse_length},
          {"depth", r.depth},
          {"first_integral", r.first_integral},
          {"second_integral", r.second_integral},
          {"depth_budget", r.depth_budget},
          {"sqrt_alpha_length", r.sqrt_alpha_length},
          {"depth_margin", r.depth_margin},
          {"length_ratio_bound", r.length_ratio_bound},
          {"ramp_time", finite_or_null(r.ramp_time)},
          {"ramp_margin", finite_or_null(r.ramp_margin)},
          {"retardation_margin", finite_or_null(r.retardation_margin)},
          {"adiabatic", r.adiabatic}};
}

void run_propagation(const RunConfig& cfg, const fs::path& dir) {
  const MediumParams& medium = *cfg.medium;
  const ControlSchedule& schedule = *cfg.schedule;
  const Grid& grid = *cfg.grid;
  const PulseConfig& pulse = *cfg.pulse;
  const bool want_mb = cfg.scenario != Scenario::propagate_polariton;
  const bool want_pol = cfg.scenario != Scenario::propagate_mb;
  const double vg0 = eval_schedule(schedule, medium, 0.0).group_velocity;
  const bool boundary = pulse.shape == PulseConfig::Shape::gaussian_t &&
                        pulse.injection == PulseConfig::Injection::boundary;

  auto temporal = [&](double t) {
    const double x = (t - pulse.center) / pulse.width;
    return cd(pulse.amplitude * std::exp(-x * x));
  };
  ComplexVector psi0(static_cast<Eigen::Index>(grid.nz()));
  double reference_energy = 0.0;
  if (pulse.shape == PulseConfig::Shape::gaussian_z) {
    for (std::size_t i = 0; i < grid.nz(); ++i) {
      const double x = (grid.z(i) - pulse.center) / pulse.width;
      psi0[static_cast<Eigen::Index>(i)] = pulse.amplitude * std::exp(-x * x);
    }
    reference_energy = mb::polariton_energy(psi0, grid);
  } else {
    if (!(vg0 > 0.0)) throw ValidationError("temporal input needs a nonzero initial group velocity");
    psi0 = mb::map_temporal_input(temporal, vg0, grid);
    reference_energy = kSpeedOfLight * pulse.amplitude * pulse.amplitude * std::sqrt(kPi / 2.0) * pulse.width;
  }

  json summary;
  summary["config"] = config_json(cfg);
  summary["initial_group_velocity"] = vg0;
  summary["reference_energy"] = reference_energy;
  json warnings = json::array();

  std::vector<double> times = {0.0};
  for (double t : cfg.output.snapshot_times)
    if (t <= grid.t_final()) append_unique(times, t);
  json marks = json::array();
  std::vector<std::pair<double, double>> mark_times;
  for (double x : cfg.output.displacement_marks) {
    const auto t = time_for_displacement(schedule, x, grid.t_final());
    if (!t) {
      warnings.push_back(fmt::format("displacement mark {} not reached by t_final", x));
      continue;
    }
    append_unique(times, *t);
    mark_times.emplace_back(x, *t);
  }
  if (!want_mb && cfg.output.snapshot_stride > 0) {
    for (std::size_t s = cfg.output.snapshot_stride; s <= grid.steps(); s += cfg.output.snapshot_stride)
      append_unique(times, grid.step() * static_cast<double>(s));
  }
  append_unique(times, grid.t_final());
  std::sort(times.begin(), times.end());

  std::vector<PolaritonField> numeric;
  std::optional<mb::Trajectory> traj;
  if (want_mb) {
    mb::SolverOptions opt;
    opt.snapshot_stride = cfg.output.snapshot_stride;
    opt.snapshot_times.assign(times.begin() + 1, times.end());
    opt.probe_planes = cfg.output.probe_planes;
    FieldState initial = FieldState::zeros(grid.nz());
    if (boundary) {
      opt.drive = mb::BoundaryDrive{temporal, pulse.z_source, 2.0};
    } else {
      initial = mb::prepare_dark_polariton(psi0, medium, schedule, grid);
    }
    traj = mb::solve_linear_mb(initial, medium, schedule, grid, opt);
    numeric = mb::to_polaritons(*traj);
    for (const auto& w : traj->warnings) warnings.push_back(w);
    times.clear();
    for (const auto& s : traj->snapshots) times.push_back(s.t);
  }

  std::vector<PolaritonField> analytic;
  if (want_pol) {
    if (cfg.propagator == Propagator::ideal) {
      for (double t : times) analytic.push_back(ideal_propagate(psi0, schedule, medium, grid, t));
    } else {
      analytic = nonadiabatic_propagate_series(psi0, schedule, medium, grid, times);
    }
    const std::size_t samples = 1001;
    std::vector<double> ct(samples);
    for (std::size_t i = 0; i < samples; ++i)
      ct[i] = grid.t_final() * static_cast<double>(i) / static_cast<double>(samples - 1);
    const CorrectionCoefficients coeff = correction_coefficients(schedule, medium, ct);
    CsvWriter w(dir / "coefficients.csv", cfg, {"t", "A", "B", "C", "D"});
    for (std::size_t i = 0; i < samples; ++i)
      w.row({coeff.t[i], coeff.A[i], coeff.B[i], coeff.C[i], coeff.D[i]});
    for (const auto& msg : coeff.warnings) warnings.push_back(msg);
  }

  json snaps = json::array();
  const double sqrtN = std::sqrt(medium.atom_number());
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j];
    const double theta = schedule.theta(t);
    json s = {{"t", t}, {"theta", theta}, {"displacement", displacement(schedule, 0.0, t)}};
    if (want_mb) {
      const FieldState& f = traj->snapshots[j];
      const PolaritonField& p = numeric[j];
      CsvWriter w(dir / "mb" / snapshot_name("snapshot", j), cfg,
                  {"z", "re_E", "im_E", "re_sba", "im_sba", "re_sbc", "im_sbc", "re_psi", "im_psi",
                   "re_phi", "im_phi"},
                  {fmt::format("t = {:.12e}", t),
                   "sba, sbc are the collective amplitudes sqrt(N) sigma_ba, sqrt(N) sigma_bc"});
      for (std::size_t i = 0; i < grid.nz(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        w.row({grid.z(i), f.E[k].real(), f.E[k].imag(), f.sba[k].real(), f.sba[k].imag(),
               f.sbc[k].real(), f.sbc[k].imag(), p.psi[k].real(), p.psi[k].imag(), p.phi[k].real(),
               p.phi[k].imag()});
      }
      const double e = mb::polariton_energy(p, grid);
      s["energy_mb"] = e;
      s["energy_ratio_mb"] = e / reference_energy;
      s["peak_mb"] = mb::peak_position(p.psi, grid);
    }
    if (want_pol) {
      const PolaritonField& p = analytic[j];
      const FieldState f = from_polariton(p, theta, medium, grid, Projection::adiabatic);
      CsvWriter w(dir / "polariton" / snapshot_name("snapshot", j), cfg,
                  {"z", "re_psi", "im_psi", "re_E", "im_E", "abs_sigma_bc"},
                  {fmt::format("t = {:.12e}", t),
                   "abs_sigma_bc is the single-atom coherence |sqrt(N) sigma_bc| / sqrt(N)"});
      for (std::size_t i = 0; i < grid.nz(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        w.row({grid.z(i), p.psi[k].real(), p.psi[k].imag(), f.E[k].real(), f.E[k].imag(),
               std::abs(f.sbc[k]) / sqrtN});
      }
      const double e = mb::polariton_energy(p, grid);
      s["energy_polariton"] = e;
      s["energy_ratio_polariton"] = e / reference_energy;
      s["peak_polariton"] = mb::peak_position(p.psi, grid);
    }
    snaps.push_back(s);
  }

  if (want_mb && want_pol) {
    const mb::DeviationReport rep = mb::compare_series(numeric, analytic, grid, cfg.output.compare_window);
    json dev = json::array();
    for (std::size_t j = 0; j < rep.snapshots.size(); ++j) {
      const auto& d = rep.snapshots[j];
      snaps[j]["relative_l2"] = d.relative_l2;
      snaps[j]["peak_shift"] = d.peak_shift;
    }
    summary["deviation"] = {{"max_relative_l2", rep.max_relative_l2},
                            {"max_abs_peak_shift", rep.max_abs_peak_shift},
                            {"max_energy_ratio_error", rep.max_energy_ratio_error}};
    if (cfg.output.compare_window)
      summary["deviation"]["window"] = {cfg.output.compare_window->first, cfg.output.compare_window->second};
  }
  summary["snapshots"] = snaps;

  for (const auto& [x, t] : mark_times) {
    json m = {{"displacement", x}, {"t", t}};
    for (std::size_t j = 0; j < times.size(); ++j) {
      if (std::abs(times[j] - t) > 1e-6 * std::max(1.0, t)) continue;
      if (want_mb) m["energy_ratio_mb"] = snaps[j]["energy_ratio_mb"];
      if (want_pol) m["energy_ratio_polariton"] = snaps[j]["energy_ratio_polariton"];
    }
    marks.push_back(m);
  }
  summary["displacement_marks"] = marks;

  if (want_mb) {
    summary["max_spin_population"] = traj->max_spin_population;
    summary["steps"] = traj->steps;
    summary["dt"] = grid.step();
    if (!traj->probes.empty()) {
      std::vector<std::string> cols = {"t"};
      json probes = json::array();
      for (const auto& p : traj->probes) {
        cols.push_back(fmt::format("re_E_z{:g}", p.z));
        cols.push_back(fmt::format("im_E_z{:g}", p.z));
        std::size_t imax = 0;
        for (std::size_t i = 0; i < p.E.size(); ++i)
          if (std::abs(p.E[i]) > std::abs(p.E[imax])) imax = i;
        probes.push_back({{"z", p.z}, {"fluence", mb::plane_fluence(p)}, {"peak_time", p.t[imax]}});
      }
      CsvWriter w(dir / "probes.csv", cfg, cols);
      const auto& t = traj->probes.front().t;
      for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<double> row = {t[i]};
        for (const auto& p : traj->probes) {
          row.push_back(p.E[i].real());
          row.push_back(p.E[i].imag());
        }
        w.row(row);
      }
      summary["probes"] = probes;
    }
  }
  if (boundary) {
    const BoundaryJump jump = boundary_jump(cd(pulse.amplitude), vg0);
    summary["boundary"] = {{"expected_psi_peak", std::abs(jump.psi_inside)},
                           {"length_factor", jump.length_factor},
                           {"injected_number", reference_energy}};
  }

  const double pulse_length =
      pulse.shape == PulseConfig::Shape::gaussian_z ? pulse.width : vg0 * pulse.width;
  summary["adiabaticity"] =
      adiabaticity_json(adiabaticity_check(schedule, medium, grid, pulse_length, medium.length()));
  summary["warnings"] = warnings;
  write_json(dir / "summary.json", summary);
}

void run_singlemode(const RunConfig& cfg, const fs::path& dir) {
  const SinglemodeConfig& sm = *cfg.singlemode;
  const singlemode::SymmetricBasis basis(sm.atoms, sm.n_max);
  const Eigen::MatrixXcd rho = singlemode::fock_state(sm.photons, sm.n_max);
  CsvWriter w(dir / "transfer.csv", cfg, {"duration", "fidelity", "max_a_population"});
  json rows = json::array();
  for (double T : sm.durations) {
    const auto r = singlemode::adiabatic_transfer(
        rho, ControlSchedule::storage_ramp(T, sm.cot_start), basis, sm.g, T);
    w.row({T, r.fidelity, r.max_excited_population});
    rows.push_back({{"duration", T},
                    {"fidelity", r.fidelity},
                    {"max_a_population", r.max_excited_population},
                    {"norm_drift", r.norm_drift},
                    {"excitation_drift", r.excitation_drift},
                    {"steps", r.steps}});
  }
  json summary;
  summary["config"] = config_json(cfg);
  summary["basis_size"] = basis.size();
  summary["transfers"] = rows;
  write_json(dir / "summary.json", summary);
}

void run_spectra(const RunConfig& cfg, const fs::path& dir) {
  const MediumParams& m = *cfg.medium;
  const SpectraConfig& sp = *cfg.spectra;
  if (sp.samples < 2) throw ValidationError("spectra.samples must be >= 2");
  if (!(sp.depth > 0.0)) throw ValidationError("spectra.depth must be > 0");
  const double omega0 = m.g2N() / m.gamma();
  const double k = sp.omega_ab / kSpeedOfLight;
  CsvWriter tr(dir / "transmission.csv", cfg,
               {"v", "delta", "delta_over_omega0", "re_chi", "im_chi", "T_exact", "T_gaussian"},
               {"chi evaluated at k = omega_ab / c"});
  CsvWriter wd(dir / "widths.csv", cfg,
               {"v", "omega", "delay", "width", "width_from_delay", "measured_width",
                "width_over_omega0"});
  CsvWriter rf(dir / "reflection.csv", cfg,
               {"v", "delta_omega", "re_n", "im_n", "R_exact", "R_near_resonance", "evanescent"});
  json widths = json::array();
  for (double v : sp.group_velocities) {
    const double omega = spectra::rabi_for_group_velocity(v, m);
    for (std::size_t i = 0; i < sp.samples; ++i) {
      const double d = -sp.delta_max + 2.0 * sp.delta_max * static_cast<double>(i) /
                                           static_cast<double>(sp.samples - 1);
      const cd chi = spectra::susceptibility(d, m, omega, k);
      const auto t = spectra::transmission(d, sp.depth, m, omega);
      tr.row({v, d, d / omega0, chi.real(), chi.imag(), t.exact, t.gaussian});
    }
    const auto w = spectra::transparency_width(m, omega, sp.depth);
    const double measured = spectra::measured_transmission_width(m, omega, sp.depth);
    wd.row({v, omega, w.delay, w.width, w.width_from_delay, measured, w.width / omega0});
    widths.push_back({{"v", v},
                      {"omega", omega},
                      {"width", w.width},
                      {"measured_width", measured},
                      {"relative_difference", measured / w.width - 1.0}});
    const double span = sp.reflection_span * v / kSpeedOfLight * sp.omega_ab;
    for (std::size_t i = 0; i < sp.samples; ++i) {
      const double dw = -span + 2.0 * span * static_cast<double>(i) / static_cast<double>(sp.samples - 1);
      const auto n = spectra::refractive_index(sp.omega_ab + dw, v, sp.omega_ab);
      const auto r = spectra::reflection(sp.omega_ab + dw, v, sp.omega_ab);
      rf.row({v, dw, n.n.real(), n.n.imag(), r.exact, r.near_resonance, r.evanescent ? 1.0 : 0.0});
    }
  }
  json summary;
  summary["config"] = config_json(cfg);
  summary["omega0"] = omega0;
  summary["depth"] = sp.depth;
  summary["alpha"] = m.alpha_at(sp.depth);
  summary["widths"] = widths;
  const auto b = spectra::storage_bounds(m.alpha_at(sp.depth), m.gamma0());
  summary["bounds"] = {{"delay_ratio", b.delay_ratio},
                       {"length_ratio", b.length_ratio},
                       {"max_delay", finite_or_null(b.max_delay)},
                       {"dephasing_unlimited", b.dephasing_unlimited}};
  write_json(dir / "summary.json", summary);
}

void run_bounds(const RunConfig& cfg, const fs::path& dir) {
  const auto b = spectra::storage_bounds(cfg.bounds->alpha, cfg.bounds->gamma_bc);
  json summary;
  summary["config"] = config_json(cfg);
  summary["bounds"] = {{"alpha", cfg.bounds->alpha},
                       {"gamma_bc", cfg.bounds->gamma_bc},
                       {"delay_ratio", b.delay_ratio},
                       {"length_ratio", b.length_ratio},
                       {"max_delay", finite_or_null(b.max_delay)},
                       {"dephasing_unlimited", b.dephasing_unlimited}};
  write_json(dir / "summary.json", summary);
}

}  // namespace

void execute(const RunConfig& cfg, const std::string& out_dir) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  switch (cfg.scenario) {
    case Scenario::propagate_mb:
    case Scenario::propagate_polariton:
    case Scenario::propagate_both:
      if (cfg.scenario != Scenario::propagate_polariton) fs::create_directories(dir / "mb");
      if (cfg.scenario != Scenario::propagate_mb) fs::create_directories(dir / "polariton");
      run_propagation(cfg, dir);
      break;
    case Scenario::singlemode: run_singlemode(cfg, dir); break;
    case Scenario::spectra: run_spectra(cfg, dir); break;
    case Scenario::bounds: run_bounds(cfg, dir); break;
  }
}

int run(const RunConfig& cfg, const std::string& out_dir) {
  try {
    execute(cfg, out_dir);
    return kExitOk;
  } catch (const ValidationError& e) {
    std::cerr << "eitlab: " << cfg.name << ": validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const WrapHazardError& e) {
    std::cerr << "eitlab: " << cfg.name << ": wrap hazard: " << e.what() << '\n';
    return kExitWrapHazard;
  } catch (const NumericalError& e) {
    std::cerr << "eitlab: " << cfg.name << ": numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "eitlab: " << cfg.name << ": " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace eitlab::app
