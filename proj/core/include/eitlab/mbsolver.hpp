#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eitlab/fields.hpp"
#include "eitlab/grid.hpp"
#include "eitlab/medium.hpp"
#include "eitlab/schedule.hpp"

namespace eitlab::mb {

/// Temporal drive injected as a source c * delta_h(z - z_source) * E_in(t) in
/// the field equation, with delta_h a normalized Gaussian of width
/// `width_cells` grid spacings (dz * sum delta_h = 1). Downstream of the
/// source the field then equals E_in(t - (z - z_source)/c) in vacuum.
/// Inside a medium the profile filters the polariton wavenumbers omega / v_g:
/// the injected photon number falls short by about (sigma / (v_g tau))^2 for
/// sigma = width_cells * dz and a pulse of duration tau.
struct BoundaryDrive {
  std::function<std::complex<double>(double)> signal;
  double z_source = 0.0;
  double width_cells = 2.0;
};

struct SolverOptions {
  /// Keep every n-th step as a snapshot (0: only t = 0, t_final and the
  /// explicit snapshot_times).
  std::size_t snapshot_stride = 0;
  /// Extra snapshot times, reached exactly by a partial step.
  std::vector<double> snapshot_times;
  /// Planes whose E(t) is recorded at every step (nearest grid point).
  std::vector<double> probe_planes;
  /// Edge field / running interior peak above which WrapHazardError is raised.
  double wrap_tolerance = 1e-6;
  std::size_t edge_cells = 5;
  std::optional<BoundaryDrive> drive;
  /// Warn when max |g E| exceeds this fraction of Omega(0), or the single-atom
  /// population |sigma_bc|^2 exceeds it.
  double weak_field_ratio = 0.1;
};

struct ProbeSeries {
  double z = 0.0;
  std::size_t index = 0;
  std::vector<double> t;
  std::vector<std::complex<double>> E;
};

struct Trajectory {
  Grid grid;
  ControlSchedule schedule;
  MediumParams medium;
  std::vector<FieldState> snapshots;  // strictly increasing t, first at t = 0
  std::vector<ProbeSeries> probes;
  std::vector<std::string> warnings;
  double max_spin_population = 0.0;
  std::size_t steps = 0;
};

/// Largest stable RK4 step: 2.8 / (c k_max + sqrt(g2N) + max Omega + gamma_ba)
/// with Omega sampled over [t0, t1].
double stable_step(const MediumParams& medium, const ControlSchedule& schedule, double dz,
                   double t0, double t1);

/// Integrates the weak-probe Maxwell-Bloch equations (collective amplitudes
/// P = sqrt(N) sigma_ba, S = sqrt(N) sigma_bc, G = sqrt(g2N)):
///   dE/dt = -c dE/dz + i G P            (+ boundary drive)
///   dP/dt = -gamma_ba P + i G E + i Omega e^{i dk z} S
///   dS/dt = -gamma0 S + i Omega e^{-i dk z} P
/// on the periodic grid with a spectral derivative and RK4 in time. The
/// medium fills the whole grid.
Trajectory solve_linear_mb(const FieldState& initial, const MediumParams& medium,
                           const ControlSchedule& schedule, const Grid& grid,
                           const SolverOptions& options = {});

/// Field state that carries a pure dark polariton psi at time t0: every
/// Fourier mode is set to the eigenvector of the local 3x3 propagation
/// matrix with the largest dark-state overlap, normalized so its psi
/// component equals psi~(k).
FieldState prepare_dark_polariton(const ComplexVector& psi, const MediumParams& medium,
                                  const ControlSchedule& schedule, const Grid& grid,
                                  double t0 = 0.0);

/// Ideal injection of a temporal input through the entrance at z = 0:
/// psi(z, 0) = sqrt(c/vg0) E_in(-z / vg0), i.e. boundary_jump amplitude and
/// vg0/c length compression.
ComplexVector map_temporal_input(const std::function<std::complex<double>(double)>& E_in,
                                 double vg0, const Grid& grid);

/// I_psi = dz * sum |psi|^2 (trapezoid rule on the periodic grid).
double polariton_energy(const PolaritonField& ps, const Grid& grid);
double polariton_energy(const ComplexVector& psi, const Grid& grid);

/// Polariton fields of every snapshot (full rotation at theta(t)).
std::vector<PolaritonField> to_polaritons(const Trajectory& traj);

/// Time-integrated intensity int |E(z0, t)|^2 dt (trapezoid).
double plane_fluence(const ProbeSeries& probe);

struct SnapshotDeviation {
  double t;
  double relative_l2;     // || |psi| - |psi_ref| || / || |psi_ref| ||
  double peak_shift;      // z_peak - z_peak_ref
  double energy_ratio;    // I(t) / I(t0) of the trajectory
  double energy_ratio_reference;
  double energy_ratio_error;  // difference of the two
};

struct DeviationReport {
  std::vector<SnapshotDeviation> snapshots;
  double max_relative_l2 = 0.0;
  double max_abs_peak_shift = 0.0;
  double max_energy_ratio_error = 0.0;
};

/// Compares two polariton series snapshot by snapshot. Times and grid sizes
/// must match. The optional window [z_lo, z_hi] restricts the profile
/// comparison.
DeviationReport compare_series(const std::vector<PolaritonField>& numeric,
                               const std::vector<PolaritonField>& reference, const Grid& grid,
                               std::optional<std::pair<double, double>> window = std::nullopt);

/// compare_series against the polariton fields of a trajectory.
DeviationReport compare_with_analytic(const Trajectory& traj,
                                      const std::vector<PolaritonField>& analytic,
                                      std::optional<std::pair<double, double>> window = std::nullopt);

/// Sub-cell peak position of |f| (parabolic refinement).
double peak_position(const ComplexVector& f, const Grid& grid);

}  // namespace eitlab::mb
