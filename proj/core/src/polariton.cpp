#include "eitlab/polariton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eitlab/errors.hpp"
#include "eitlab/fft.hpp"
#include "eitlab/jet.hpp"
#include "eitlab/quadrature.hpp"

namespace eitlab {
namespace {

using cd = std::complex<double>;

ComplexVector phase(const MediumParams& medium, const Grid& grid, double sign) {
  ComplexVector p(static_cast<Eigen::Index>(grid.nz()));
  for (std::size_t i = 0; i < grid.nz(); ++i)
    p[static_cast<Eigen::Index>(i)] = std::polar(1.0, sign * medium.delta_k() * grid.z(i));
  return p;
}

double sin2(const ControlSchedule& s, double t) {
  const double c = s.cot_theta(t);
  return 1.0 / (1.0 + c * c);
}

double cos2(const ControlSchedule& s, double t) {
  const double c = s.cot_theta(t);
  return c * c / (1.0 + c * c);
}

// thetadot^2 sin^2 theta / g2N as a jet truncated to its first derivative.
Jet a_kernel(const Jet& th, double g2N) {
  const Jet thdot{th.d1, th.d2, th.d3, 0.0};
  return square(thdot) * square(sin(th)) / g2N;
}

Jet c_kernel(const Jet& th, double g2N) {
  const Jet s2 = square(sin(th));
  return s2 * s2 * square(cos(th)) / g2N;
}

double b_value(const Jet& th, double g2N) {
  const Jet s = sin(th);
  return s.v / (3.0 * g2N) * (s * s * s).d2;
}

double d_value(const Jet& th, double g2N) {
  const double s = std::sin(th.v), c = std::cos(th.v);
  const double sc = s * c;
  return sc * sc * sc * sc / g2N;
}

void check_edges(const ComplexVector& f, std::size_t edge_cells, double tolerance, double t) {
  const auto n = static_cast<std::size_t>(f.size());
  if (n <= 2 * edge_cells) return;
  const Eigen::VectorXd mag = f.cwiseAbs();
  const double edge = std::max(mag.head(static_cast<Eigen::Index>(edge_cells)).maxCoeff(),
                               mag.tail(static_cast<Eigen::Index>(edge_cells)).maxCoeff());
  const double peak =
      mag.segment(static_cast<Eigen::Index>(edge_cells), static_cast<Eigen::Index>(n - 2 * edge_cells))
          .maxCoeff();
  if (edge > tolerance * peak) {
    std::ostringstream msg;
    msg << "field reaches the domain edge at t=" << t << " (edge/peak=" << edge / peak << ")";
    throw WrapHazardError(msg.str());
  }
}

}  // namespace

PolaritonField to_polariton(const FieldState& fs, double theta, const MediumParams& medium,
                            const Grid& grid) {
  fs.validate(grid.nz());
  const double c = std::cos(theta), s = std::sin(theta);
  ComplexVector spin = fs.sbc;
  if (medium.delta_k() != 0.0) spin = spin.cwiseProduct(phase(medium, grid, 1.0));
  return {fs.t, c * fs.E - s * spin, s * fs.E + c * spin};
}

FieldState from_polariton(const PolaritonField& ps, double theta, const MediumParams& medium,
                          const Grid& grid, Projection projection) {
  ps.validate(grid.nz());
  const double c = std::cos(theta), s = std::sin(theta);
  FieldState fs = FieldState::zeros(grid.nz(), ps.t);
  if (projection == Projection::adiabatic) {
    fs.E = c * ps.psi;
    fs.sbc = -s * ps.psi;
  } else {
    fs.E = c * ps.psi + s * ps.phi;
    fs.sbc = -s * ps.psi + c * ps.phi;
  }
  if (medium.delta_k() != 0.0) fs.sbc = fs.sbc.cwiseProduct(phase(medium, grid, -1.0));
  return fs;
}

double displacement(const ControlSchedule& schedule, double t0, double t1) {
  return kSpeedOfLight * integrate([&](double t) { return cos2(schedule, t); }, t0, t1);
}

double decay_factor(const ControlSchedule& schedule, const MediumParams& medium, double t0,
                    double t1) {
  if (medium.gamma0() == 0.0) return 1.0;
  return std::exp(-medium.gamma0() *
                  integrate([&](double t) { return sin2(schedule, t); }, t0, t1));
}

PolaritonField ideal_propagate(const ComplexVector& psi0, const ControlSchedule& schedule,
                               const MediumParams& medium, const Grid& grid, double t,
                               double support_tolerance, std::size_t edge_cells) {
  if (static_cast<std::size_t>(psi0.size()) != grid.nz())
    throw ValidationError("ideal_propagate: psi0 length differs from the grid");
  check_edges(psi0, edge_cells, support_tolerance, 0.0);
  const double x = displacement(schedule, 0.0, t);

  // Support of the input, moved by x, must stay inside the domain.
  const Eigen::VectorXd mag = psi0.cwiseAbs();
  const double peak = mag.maxCoeff();
  if (peak > 0.0) {
    std::size_t first = grid.nz(), last = 0;
    for (std::size_t i = 0; i < grid.nz(); ++i) {
      if (mag[static_cast<Eigen::Index>(i)] > support_tolerance * peak) {
        first = std::min(first, i);
        last = i;
      }
    }
    const double lo = grid.z(first) + x, hi = grid.z(last) + x;
    const double margin = grid.dz() * static_cast<double>(edge_cells);
    if (lo < grid.z_min() + margin || hi > grid.z_max() - margin) {
      std::ostringstream msg;
      msg << "ideal_propagate: pulse support [" << lo << ", " << hi << "] at t=" << t
          << " leaves the domain [" << grid.z_min() << ", " << grid.z_max() << ")";
      throw WrapHazardError(msg.str());
    }
  }

  Fft fft(grid.nz());
  ComplexVector modes = fft.forward(psi0);
  const Eigen::VectorXd k = grid.wavenumbers();
  for (Eigen::Index i = 0; i < modes.size(); ++i) modes[i] *= std::polar(1.0, -k[i] * x);
  PolaritonField out = PolaritonField::zeros(grid.nz(), t);
  out.psi = fft.inverse(modes) * decay_factor(schedule, medium, 0.0, t);
  return out;
}

CoefficientSample coefficients_at(const ControlSchedule& schedule, const MediumParams& medium,
                                  double t) {
  const Jet th = schedule.theta_jet(t);
  const double g2N = medium.g2N(), gamma = medium.gamma_ba();
  const Jet xa = a_kernel(th, g2N);
  const Jet xc = c_kernel(th, g2N);
  return {gamma * xa.v + 0.5 * xa.d1, b_value(th, g2N), gamma * xc.v + 0.5 * xc.d1,
          d_value(th, g2N)};
}

CorrectionCoefficients correction_coefficients(const ControlSchedule& schedule,
                                               const MediumParams& medium,
                                               const std::vector<double>& times) {
  if (schedule.is_tabulated() && !times.empty()) {
    const double h = 0.5 * schedule.table_spacing();
    double worst = 0.0, scale = 0.0;
    for (double t : times) {
      const double d_h = schedule.finite_difference_theta_jet(t, h).d2;
      const double d_2h = schedule.finite_difference_theta_jet(t, 2.0 * h).d2;
      worst = std::max(worst, std::abs(d_h - d_2h));
      scale = std::max(scale, std::abs(d_h));
    }
    if (scale > 0.0 && worst > 0.05 * scale) {
      std::ostringstream msg;
      msg << "correction_coefficients: tabulated schedule too sparse for stable second "
             "derivatives (h vs 2h differ by "
          << worst / scale * 100.0 << "% of max |theta''|)";
      throw NumericalError(msg.str());
    }
  }
  CorrectionCoefficients out;
  out.t = times;
  bool negative = false;
  double first_negative = 0.0, last_negative = 0.0;
  for (double t : times) {
    const CoefficientSample c = coefficients_at(schedule, medium, t);
    out.A.push_back(c.A);
    out.B.push_back(c.B);
    out.C.push_back(c.C);
    out.D.push_back(c.D);
    if (c.A < 0.0) {
      if (!negative) first_negative = t;
      negative = true;
      last_negative = t;
    }
  }
  if (negative) {
    std::ostringstream msg;
    msg << "A(t) < 0 between t=" << first_negative << " and t=" << last_negative
        << " (time-derivative term dominates)";
    out.warnings.push_back(msg.str());
  }
  return out;
}

NonadiabaticIntegrals& NonadiabaticIntegrals::operator+=(const NonadiabaticIntegrals& o) {
  displacement += o.displacement;
  B += o.B;
  D += o.D;
  A += o.A;
  C += o.C;
  decay_exponent += o.decay_exponent;
  return *this;
}

NonadiabaticIntegrals nonadiabatic_integrals(const ControlSchedule& schedule,
                                             const MediumParams& medium, double t0, double t1) {
  const double g2N = medium.g2N(), gamma = medium.gamma_ba();
  NonadiabaticIntegrals r;
  if (t0 == t1) return r;
  r.displacement = displacement(schedule, t0, t1);
  r.decay_exponent =
      medium.gamma0() * integrate([&](double t) { return sin2(schedule, t); }, t0, t1);
  if (schedule.is_constant()) {
    const Jet th = schedule.theta_jet(t0);
    r.C = gamma * c_kernel(th, g2N).v * (t1 - t0);
    r.D = d_value(th, g2N) * (t1 - t0);
    return r;
  }
  // The (d/dt)/2 parts of A and C integrate to endpoint differences.
  const Jet th0 = schedule.theta_jet(t0), th1 = schedule.theta_jet(t1);
  r.A = gamma * integrate([&](double t) { return a_kernel(schedule.theta_jet(t), g2N).v; }, t0, t1) +
        0.5 * (a_kernel(th1, g2N).v - a_kernel(th0, g2N).v);
  r.C = gamma * integrate([&](double t) { return c_kernel(schedule.theta_jet(t), g2N).v; }, t0, t1) +
        0.5 * (c_kernel(th1, g2N).v - c_kernel(th0, g2N).v);
  r.B = integrate([&](double t) { return b_value(schedule.theta_jet(t), g2N); }, t0, t1);
  r.D = integrate([&](double t) { return d_value(schedule.theta_jet(t), g2N); }, t0, t1);
  return r;
}

std::vector<NonadiabaticIntegrals> nonadiabatic_integral_series(const ControlSchedule& schedule,
                                                                const MediumParams& medium,
                                                                const std::vector<double>& times) {
  std::vector<NonadiabaticIntegrals> out;
  out.reserve(times.size());
  NonadiabaticIntegrals acc;
  double prev = 0.0;
  for (double t : times) {
    if (t < prev) throw ValidationError("nonadiabatic_integral_series: times must ascend from 0");
    acc += nonadiabatic_integrals(schedule, medium, prev, t);
    out.push_back(acc);
    prev = t;
  }
  return out;
}

std::complex<double> nonadiabatic_factor(double k, const NonadiabaticIntegrals& in) {
  const double c = kSpeedOfLight;
  const double kc = k * c;
  const double ph = -k * (in.displacement + c * in.B) + kc * kc * kc * in.D;
  const double damp = -in.A - kc * kc * in.C - in.decay_exponent;
  return std::exp(cd(damp, ph));
}

std::vector<PolaritonField> nonadiabatic_propagate_series(
    const ComplexVector& psi0, const ControlSchedule& schedule, const MediumParams& medium,
    const Grid& grid, const std::vector<double>& times, double wrap_tolerance,
    std::size_t edge_cells) {
  if (static_cast<std::size_t>(psi0.size()) != grid.nz())
    throw ValidationError("nonadiabatic_propagate: psi0 length differs from the grid");
  check_edges(psi0, edge_cells, wrap_tolerance, 0.0);
  const std::vector<NonadiabaticIntegrals> ints =
      nonadiabatic_integral_series(schedule, medium, times);
  Fft fft(grid.nz());
  const ComplexVector spec0 = fft.forward(psi0);
  const Eigen::VectorXd k = grid.wavenumbers();
  std::vector<PolaritonField> out;
  out.reserve(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    ComplexVector modes = spec0;
    for (Eigen::Index i = 0; i < modes.size(); ++i) modes[i] *= nonadiabatic_factor(k[i], ints[j]);
    PolaritonField f = PolaritonField::zeros(grid.nz(), times[j]);
    f.psi = fft.inverse(modes);
    if (!f.psi.allFinite()) throw NumericalError("nonadiabatic_propagate: non-finite field");
    check_edges(f.psi, edge_cells, wrap_tolerance, times[j]);
    out.push_back(std::move(f));
  }
  return out;
}

PolaritonField nonadiabatic_propagate(const ComplexVector& psi0, const ControlSchedule& schedule,
                                      const MediumParams& medium, const Grid& grid, double t,
                                      double wrap_tolerance, std::size_t edge_cells) {
  return nonadiabatic_propagate_series(psi0, schedule, medium, grid, {t}, wrap_tolerance,
                                       edge_cells)
      .front();
}

ComplexVector bright_polariton_estimate(const ComplexVector& psi, const ControlSchedule& schedule,
                                        const MediumParams& medium, const Grid& grid, double t) {
  if (static_cast<std::size_t>(psi.size()) != grid.nz())
    throw ValidationError("bright_polariton_estimate: length differs from the grid");
  const Jet th = schedule.theta_jet(t);
  const double s = std::sin(th.v), c = std::cos(th.v);
  const double r = medium.gamma_ba() / medium.g2N();
  Fft fft(grid.nz());
  ComplexVector modes = fft.forward(psi);
  const Eigen::VectorXd k = grid.wavenumbers();
  modes = modes.cwiseProduct((cd(0.0, 1.0) * k.cast<cd>()).eval());
  modes[static_cast<Eigen::Index>(grid.nz() / 2)] = 0.0;
  const ComplexVector dpsi = fft.inverse(modes);
  return s * s * r * th.d1 * psi - s * s * s * c * r * kSpeedOfLight * dpsi;
}

BoundaryJump boundary_jump(std::complex<double> E_in, double vg0) {
  if (!(vg0 > 0.0 && vg0 <= kSpeedOfLight))
    throw ValidationError("boundary_jump: need 0 < vg0 <= c");
  const double f = std::sqrt(kSpeedOfLight / vg0);
  return {f * E_in, f, vg0 / kSpeedOfLight};
}

AdiabaticityReport adiabaticity_check(const ControlSchedule& schedule, const MediumParams& medium,
                                      const Grid& grid, double pulse_length, double depth) {
  if (!(pulse_length > 0.0)) throw ValidationError("adiabaticity_check: pulse length must be > 0");
  if (!(depth > 0.0)) throw ValidationError("adiabaticity_check: depth must be > 0");
  const double g2N = medium.g2N(), gamma = medium.gamma_ba(), c = kSpeedOfLight;
  const double T = grid.t_final();
  const double k = 1.0 / pulse_length;
  AdiabaticityReport r{};
  r.pulse_length = pulse_length;
  r.depth = depth;
  r.first_integral =
      gamma * k * k * c * c *
      integrate([&](double t) { return c_kernel(schedule.theta_jet(t), g2N).v; }, 0.0, T);
  r.second_integral =
      schedule.is_constant()
          ? 0.0
          : gamma * integrate([&](double t) { return a_kernel(schedule.theta_jet(t), g2N).v; },
                              0.0, T);
  r.depth_budget = g2N / (gamma * c) * pulse_length * pulse_length / depth;
  r.sqrt_alpha_length = std::sqrt(g2N * depth / (gamma * c)) * pulse_length;
  r.depth_margin = depth / r.sqrt_alpha_length;
  r.length_ratio_bound = std::sqrt(medium.alpha());

  double max_rate = 0.0;
  if (!schedule.is_constant()) {
    const int samples = 4001;
    for (int i = 0; i < samples; ++i)
      max_rate = std::max(max_rate, std::abs(schedule.theta_jet(T * i / (samples - 1.0)).d1));
  }
  const double inf = std::numeric_limits<double>::infinity();
  r.ramp_time = max_rate > 0.0 ? 1.0 / max_rate : inf;
  const double vg0 = c * cos2(schedule, 0.0);
  const double limit = medium.absorption_length() / c * (vg0 / c);
  r.ramp_margin = limit > 0.0 ? r.ramp_time / limit : inf;
  r.retardation_margin = r.ramp_time * c / pulse_length;
  r.adiabatic = r.first_integral < 0.1 && r.second_integral < 0.1 && r.ramp_margin > 1.0;
  return r;
}

}  // namespace eitlab
