#include "eitlab/mbsolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eitlab/errors.hpp"
#include "eitlab/fft.hpp"
#include "eitlab/polariton.hpp"

namespace eitlab::mb {
namespace {

using cd = std::complex<double>;
using Arr = Eigen::ArrayXcd;

constexpr double kStabilityLimit = 2.8;

double max_cot(const ControlSchedule& schedule, double t0, double t1) {
  double m = 0.0;
  const int samples = 4001;
  for (int i = 0; i < samples; ++i) m = std::max(m, schedule.cot_theta(t0 + (t1 - t0) * i / (samples - 1.0)));
  return m;
}

struct State {
  Arr E, P, S;
};

class Integrator {
 public:
  Integrator(const MediumParams& medium, const ControlSchedule& schedule, const Grid& grid,
             const std::optional<BoundaryDrive>& drive)
      : medium_(medium), schedule_(schedule), grid_(grid), drive_(drive), fft_(grid.nz()) {
    const auto n = static_cast<Eigen::Index>(grid.nz());
    const Eigen::VectorXd k = grid.wavenumbers();
    ik_ = Arr(n);
    for (Eigen::Index i = 0; i < n; ++i) ik_[i] = cd(0.0, k[i]);
    ik_[n / 2] = 0.0;  // Nyquist mode has no consistent derivative
    ph_ = Arr::Ones(n);
    if (medium.delta_k() != 0.0)
      for (Eigen::Index i = 0; i < n; ++i)
        ph_[i] = std::polar(1.0, medium.delta_k() * grid.z(static_cast<std::size_t>(i)));
    phc_ = ph_.conjugate();
    if (drive_) {
      const double sigma = drive_->width_cells * grid.dz();
      profile_ = Eigen::ArrayXd(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x = (grid.z(static_cast<std::size_t>(i)) - drive_->z_source) / sigma;
        profile_[i] = std::exp(-0.5 * x * x);
      }
      profile_ /= profile_.sum() * grid.dz();
    }
    spec_ = Arr(n);
    tmp_ = Arr(n);
    G_ = medium.collective_coupling();
  }

  void rhs(double t, const State& y, State& dy) {
    const double omega = G_ * schedule_.cot_theta(t);
    const cd iG(0.0, G_), iO(0.0, omega);
    fft_.forward(y.E.data(), spec_.data());
    spec_ *= ik_;
    fft_.inverse(spec_.data(), tmp_.data());
    dy.E = -kSpeedOfLight * tmp_ + iG * y.P;
    if (drive_) dy.E += (kSpeedOfLight * drive_->signal(t)) * profile_.cast<cd>();
    dy.P = -medium_.gamma_ba() * y.P + iG * y.E + iO * (ph_ * y.S);
    dy.S = -medium_.gamma0() * y.S + iO * (phc_ * y.P);
  }

  State step(double t, const State& y, double h) {
    State k1, k2, k3, k4, w;
    rhs(t, y, k1);
    w = {y.E + 0.5 * h * k1.E, y.P + 0.5 * h * k1.P, y.S + 0.5 * h * k1.S};
    rhs(t + 0.5 * h, w, k2);
    w = {y.E + 0.5 * h * k2.E, y.P + 0.5 * h * k2.P, y.S + 0.5 * h * k2.S};
    rhs(t + 0.5 * h, w, k3);
    w = {y.E + h * k3.E, y.P + h * k3.P, y.S + h * k3.S};
    rhs(t + h, w, k4);
    return {y.E + (h / 6.0) * (k1.E + 2.0 * k2.E + 2.0 * k3.E + k4.E),
            y.P + (h / 6.0) * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P),
            y.S + (h / 6.0) * (k1.S + 2.0 * k2.S + 2.0 * k3.S + k4.S)};
  }

  double stiffness(double t, double h) const {
    const double omega =
        G_ * std::max({schedule_.cot_theta(t), schedule_.cot_theta(t + 0.5 * h),
                       schedule_.cot_theta(t + h)});
    return h * (kSpeedOfLight * grid_.k_max() + G_ + omega + medium_.gamma_ba());
  }

 private:
  const MediumParams& medium_;
  const ControlSchedule& schedule_;
  const Grid& grid_;
  const std::optional<BoundaryDrive>& drive_;
  Fft fft_;
  Arr ik_, ph_, phc_, spec_, tmp_;
  Eigen::ArrayXd profile_;
  double G_ = 0.0;
};

FieldState to_field_state(double t, const State& s) {
  return {t, s.E.matrix(), s.P.matrix(), s.S.matrix()};
}

double edge_max(const Arr& f, std::size_t cells) {
  const auto c = static_cast<Eigen::Index>(cells);
  return std::max(f.head(c).abs().maxCoeff(), f.tail(c).abs().maxCoeff());
}

double interior_max(const Arr& f, std::size_t cells) {
  const auto c = static_cast<Eigen::Index>(cells);
  return f.segment(c, f.size() - 2 * c).abs().maxCoeff();
}

}  // namespace

double stable_step(const MediumParams& medium, const ControlSchedule& schedule, double dz,
                   double t0, double t1) {
  const double rate = kSpeedOfLight * kPi / dz + medium.collective_coupling() * (1.0 + max_cot(schedule, t0, t1)) +
                      medium.gamma_ba();
  return 0.99 * kStabilityLimit / rate;
}

Trajectory solve_linear_mb(const FieldState& initial, const MediumParams& medium,
                           const ControlSchedule& schedule, const Grid& grid,
                           const SolverOptions& options) {
  initial.validate(grid.nz());
  if (options.drive && !options.drive->signal)
    throw ValidationError("solve_linear_mb: boundary drive without a signal");
  if (2 * options.edge_cells >= grid.nz())
    throw ValidationError("solve_linear_mb: edge_cells too large for the grid");
  const auto [lo, hi] = schedule.domain();
  if (lo > initial.t || hi < initial.t + grid.t_final())
    throw ValidationError("solve_linear_mb: schedule domain shorter than the run");

  Trajectory traj{grid, schedule, medium, {}, {}, {}, 0.0, 0};
  Integrator integ(medium, schedule, grid, options.drive);
  State y{initial.E.array(), initial.sba.array(), initial.sbc.array()};
  const double t0 = initial.t;
  const std::size_t steps = grid.steps();
  const double h = grid.step();
  const std::size_t cells = options.edge_cells;

  for (double z : options.probe_planes) {
    if (z < grid.z_min() || z >= grid.z_max())
      throw ValidationError("solve_linear_mb: probe plane outside the grid");
    const std::size_t idx = grid.nearest_index(z);
    traj.probes.push_back({grid.z(idx), idx, {t0}, {y.E[static_cast<Eigen::Index>(idx)]}});
  }

  std::vector<double> pending;
  for (double ts : options.snapshot_times) {
    if (ts < 0.0 || ts > grid.t_final() * (1.0 + 1e-12))
      throw ValidationError("solve_linear_mb: snapshot time outside [0, t_final]");
    pending.push_back(t0 + ts);
  }
  std::sort(pending.begin(), pending.end());
  std::size_t next = 0;

  auto keep = [&](double t, const State& s) {
    if (!traj.snapshots.empty() && t <= traj.snapshots.back().t + 1e-12 * std::max(1.0, std::abs(t)))
      return;
    traj.snapshots.push_back(to_field_state(t, s));
    traj.max_spin_population = std::max(traj.max_spin_population,
                                         max_spin_population(traj.snapshots.back(), medium.atom_number()));
  };
  keep(t0, y);
  while (next < pending.size() && pending[next] <= t0) ++next;

  double peak = std::max({interior_max(y.E, cells), interior_max(y.P, cells), interior_max(y.S, cells)});
  double max_field = y.E.abs().maxCoeff();
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t0 + h * static_cast<double>(s);
    const double t_next = t0 + h * static_cast<double>(s + 1);
    const double stiff = integ.stiffness(t, h);
    if (stiff > kStabilityLimit) {
      std::ostringstream msg;
      msg << "solve_linear_mb: time step too large for the local rates at t=" << t
          << " (dt * rate = " << stiff << " > " << kStabilityLimit << "); use dt <= "
          << stable_step(medium, schedule, grid.dz(), t, t + h);
      throw ValidationError(msg.str());
    }
    while (next < pending.size() && pending[next] < t_next - 1e-9 * h) {
      keep(pending[next], integ.step(t, y, pending[next] - t));
      ++next;
    }
    y = integ.step(t, y, h);

    const double total = y.E.abs2().sum() + y.P.abs2().sum() + y.S.abs2().sum();
    if (!std::isfinite(total)) {
      std::ostringstream msg;
      msg << "solve_linear_mb: non-finite field at t=" << t_next;
      throw NumericalError(msg.str());
    }
    peak = std::max({peak, interior_max(y.E, cells), interior_max(y.P, cells), interior_max(y.S, cells)});
    const double edge = std::max({edge_max(y.E, cells), edge_max(y.P, cells), edge_max(y.S, cells)});
    if (peak > 0.0 && edge > options.wrap_tolerance * peak) {
      std::ostringstream msg;
      msg << "solve_linear_mb: field within " << cells << " cells of the domain edge at t=" << t_next
          << " (edge/peak=" << edge / peak << "); enlarge the domain";
      throw WrapHazardError(msg.str());
    }
    max_field = std::max(max_field, y.E.abs().maxCoeff());
    for (auto& p : traj.probes) {
      p.t.push_back(t_next);
      p.E.push_back(y.E[static_cast<Eigen::Index>(p.index)]);
    }
    const bool on_stride = options.snapshot_stride > 0 && (s + 1) % options.snapshot_stride == 0;
    const bool on_request = next < pending.size() && std::abs(pending[next] - t_next) <= 1e-9 * h;
    if (on_request) ++next;
    if (on_stride || on_request || s + 1 == steps) keep(t_next, y);
  }
  traj.steps = steps;

  const double g = medium.collective_coupling() / std::sqrt(medium.atom_number());
  const double omega0 = medium.collective_coupling() * schedule.cot_theta(t0);
  if (max_field > 0.0 && g * max_field > options.weak_field_ratio * omega0) {
    std::ostringstream msg;
    msg << "probe not weak: max |g E| = " << g * max_field << " vs Omega(0) = " << omega0;
    traj.warnings.push_back(msg.str());
  }
  if (traj.max_spin_population > options.weak_field_ratio) {
    std::ostringstream msg;
    msg << "single-atom population |sigma_bc|^2 reached " << traj.max_spin_population
        << "; the linear model is outside its weak-probe regime";
    traj.warnings.push_back(msg.str());
  }
  return traj;
}

FieldState prepare_dark_polariton(const ComplexVector& psi, const MediumParams& medium,
                                  const ControlSchedule& schedule, const Grid& grid, double t0) {
  if (static_cast<std::size_t>(psi.size()) != grid.nz())
    throw ValidationError("prepare_dark_polariton: psi length differs from the grid");
  const double theta = schedule.theta(t0);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double G = medium.collective_coupling();
  const double omega = G * schedule.cot_theta(t0);
  const cd i(0.0, 1.0);

  Fft fft(grid.nz());
  const ComplexVector spec = fft.forward(psi);
  const Eigen::VectorXd k = grid.wavenumbers();
  const auto n = static_cast<Eigen::Index>(grid.nz());
  ComplexVector Ek(n), Pk(n), Sk(n);
  Eigen::Vector3cd dark(ct, 0.0, -st);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Matrix3cd M;
    M << -i * kSpeedOfLight * k[j], i * G, 0.0,
         i * G, -medium.gamma_ba(), i * omega,
         0.0, i * omega, -medium.gamma0();
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(M);
    Eigen::Index best = 0;
    double best_overlap = -1.0;
    for (Eigen::Index c = 0; c < 3; ++c) {
      const Eigen::Vector3cd v = es.eigenvectors().col(c).normalized();
      const double ov = std::abs(dark.dot(v));
      if (ov > best_overlap) {
        best_overlap = ov;
        best = c;
      }
    }
    Eigen::Vector3cd v = es.eigenvectors().col(best);
    const cd psi_comp = ct * v[0] - st * v[2];
    if (std::abs(psi_comp) < 1e-12 * v.norm()) {
      Ek[j] = Pk[j] = Sk[j] = 0.0;
      continue;
    }
    v /= psi_comp;
    Ek[j] = v[0] * spec[j];
    Pk[j] = v[1] * spec[j];
    Sk[j] = v[2] * spec[j];
  }
  FieldState fs{t0, fft.inverse(Ek), fft.inverse(Pk), fft.inverse(Sk)};
  if (medium.delta_k() != 0.0) {
    for (Eigen::Index j = 0; j < n; ++j)
      fs.sbc[j] *= std::polar(1.0, -medium.delta_k() * grid.z(static_cast<std::size_t>(j)));
  }
  return fs;
}

ComplexVector map_temporal_input(const std::function<std::complex<double>(double)>& E_in,
                                 double vg0, const Grid& grid) {
  if (!(vg0 > 0.0 && vg0 <= kSpeedOfLight))
    throw ValidationError("map_temporal_input: need 0 < vg0 <= c");
  const double amp = std::sqrt(kSpeedOfLight / vg0);
  ComplexVector psi(static_cast<Eigen::Index>(grid.nz()));
  for (std::size_t i = 0; i < grid.nz(); ++i)
    psi[static_cast<Eigen::Index>(i)] = amp * E_in(-grid.z(i) / vg0);
  return psi;
}

double polariton_energy(const ComplexVector& psi, const Grid& grid) {
  return grid.dz() * psi.squaredNorm();
}

double polariton_energy(const PolaritonField& ps, const Grid& grid) {
  return polariton_energy(ps.psi, grid);
}

std::vector<PolaritonField> to_polaritons(const Trajectory& traj) {
  std::vector<PolaritonField> out;
  out.reserve(traj.snapshots.size());
  for (const FieldState& fs : traj.snapshots)
    out.push_back(to_polariton(fs, traj.schedule.theta(fs.t), traj.medium, traj.grid));
  return out;
}

double plane_fluence(const ProbeSeries& probe) {
  double sum = 0.0;
  for (std::size_t i = 1; i < probe.t.size(); ++i)
    sum += 0.5 * (std::norm(probe.E[i]) + std::norm(probe.E[i - 1])) * (probe.t[i] - probe.t[i - 1]);
  return sum;
}

double peak_position(const ComplexVector& f, const Grid& grid) {
  const Eigen::VectorXd mag = f.cwiseAbs();
  Eigen::Index imax = 0;
  mag.maxCoeff(&imax);
  const auto n = mag.size();
  const double ym = mag[(imax + n - 1) % n], y0 = mag[imax], yp = mag[(imax + 1) % n];
  const double denom = ym - 2.0 * y0 + yp;
  const double offset = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
  return grid.z(static_cast<std::size_t>(imax)) + offset * grid.dz();
}

DeviationReport compare_series(const std::vector<PolaritonField>& numeric,
                               const std::vector<PolaritonField>& reference, const Grid& grid,
                               std::optional<std::pair<double, double>> window) {
  if (numeric.size() != reference.size())
    throw ValidationError("compare: snapshot counts differ");
  DeviationReport rep;
  if (numeric.empty()) return rep;
  Eigen::ArrayXd mask = Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(grid.nz()));
  if (window) {
    for (std::size_t i = 0; i < grid.nz(); ++i) {
      const double z = grid.z(i);
      if (z < window->first || z > window->second) mask[static_cast<Eigen::Index>(i)] = 0.0;
    }
  }
  const double i0 = polariton_energy(numeric.front(), grid);
  const double r0 = polariton_energy(reference.front(), grid);
  for (std::size_t j = 0; j < numeric.size(); ++j) {
    const auto& a = numeric[j];
    const auto& b = reference[j];
    if (a.size() != grid.nz() || b.size() != grid.nz())
      throw ValidationError("compare: grid mismatch");
    if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, std::abs(a.t)))
      throw ValidationError("compare: snapshot times differ");
    const Eigen::ArrayXd ma = a.psi.cwiseAbs().array() * mask;
    const Eigen::ArrayXd mb = b.psi.cwiseAbs().array() * mask;
    const double ref = std::sqrt(mb.square().sum());
    SnapshotDeviation d{};
    d.t = a.t;
    d.relative_l2 = ref > 0.0 ? std::sqrt((ma - mb).square().sum()) / ref
                              : std::sqrt(ma.square().sum());
    d.peak_shift = peak_position((a.psi.array() * mask.cast<cd>()).matrix(), grid) -
                   peak_position((b.psi.array() * mask.cast<cd>()).matrix(), grid);
    d.energy_ratio = i0 > 0.0 ? polariton_energy(a, grid) / i0 : 0.0;
    d.energy_ratio_reference = r0 > 0.0 ? polariton_energy(b, grid) / r0 : 0.0;
    d.energy_ratio_error = std::abs(d.energy_ratio - d.energy_ratio_reference);
    rep.max_relative_l2 = std::max(rep.max_relative_l2, d.relative_l2);
    rep.max_abs_peak_shift = std::max(rep.max_abs_peak_shift, std::abs(d.peak_shift));
    rep.max_energy_ratio_error = std::max(rep.max_energy_ratio_error, d.energy_ratio_error);
    rep.snapshots.push_back(d);
  }
  return rep;
}

DeviationReport compare_with_analytic(const Trajectory& traj,
                                      const std::vector<PolaritonField>& analytic,
                                      std::optional<std::pair<double, double>> window) {
  for (const auto& a : analytic)
    if (a.size() != traj.grid.nz()) throw ValidationError("compare: grid mismatch");
  return compare_series(to_polaritons(traj), analytic, traj.grid, window);
}

}  // namespace eitlab::mb
