#include "eitlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "eitlab/errors.hpp"
#include "eitlab/fft.hpp"

namespace eitlab::spectra {
namespace {

using cd = std::complex<double>;

void check_drive(double omega_drive) {
  if (!(omega_drive > 0.0 && std::isfinite(omega_drive)))
    throw ValidationError("spectra: control Rabi frequency must be > 0");
}

double absorption_exponent(double delta, double depth, const MediumParams& medium,
                           double omega_drive) {
  const double g = medium.gamma_ba();
  const double o2 = omega_drive * omega_drive;
  const double d2 = delta * delta;
  const double den = (o2 - d2) * (o2 - d2) + g * g * d2;
  if (den == 0.0) return d2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return medium.g2N() * depth / kSpeedOfLight * g * d2 / den;
}

}  // namespace

cd susceptibility(double delta, const MediumParams& medium, double omega_drive, double k) {
  check_drive(omega_drive);
  if (!(k > 0.0)) throw ValidationError("susceptibility: k must be > 0");
  const double o2 = omega_drive * omega_drive;
  const double ng = medium.g2N() / o2;
  const cd den(o2 - delta * delta, -medium.gamma_ba() * delta);
  return ng / (k * kSpeedOfLight) * o2 * delta / den;
}

bool near_pole(double delta, const MediumParams& medium, double omega_drive, double rel) {
  const double o2 = omega_drive * omega_drive;
  return std::abs(cd(o2 - delta * delta, -medium.gamma_ba() * delta)) < rel * o2;
}

double rabi_for_group_velocity(double v, const MediumParams& medium) {
  if (!(v > 0.0 && v < kSpeedOfLight))
    throw ValidationError("rabi_for_group_velocity: need 0 < v < c");
  return std::sqrt(medium.g2N() * v / (kSpeedOfLight - v));
}

Transmission transmission(double delta, double depth, const MediumParams& medium,
                          double omega_drive) {
  check_drive(omega_drive);
  if (!(depth >= 0.0)) throw ValidationError("transmission: depth must be >= 0");
  if (depth == 0.0) return {1.0, 1.0};
  const double w = transparency_width(medium, omega_drive, depth).width;
  return {std::exp(-absorption_exponent(delta, depth, medium, omega_drive)),
          std::exp(-(delta * delta) / (w * w))};
}

TransparencyWidth transparency_width(const MediumParams& medium, double omega_drive,
                                     double depth) {
  check_drive(omega_drive);
  if (!(depth > 0.0)) throw ValidationError("transparency_width: depth must be > 0");
  const double a = medium.g2N() * depth / (medium.gamma_ba() * kSpeedOfLight);
  const double o2 = omega_drive * omega_drive;
  const double delay = medium.g2N() / o2 * depth / kSpeedOfLight;
  return {o2 / medium.gamma_ba() / std::sqrt(a), std::sqrt(a) / delay, delay, a};
}

double measured_transmission_width(const MediumParams& medium, double omega_drive, double depth,
                                   double level) {
  check_drive(omega_drive);
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("transmission level must be in (0, 1)");
  const double target = -std::log(level);
  auto f = [&](double d) { return absorption_exponent(d, depth, medium, omega_drive) - target; };
  // The exponent grows monotonically from 0 up to the Autler-Townes peak at delta = Omega.
  const double hi = omega_drive;
  if (f(hi) < 0.0)
    throw NumericalError("measured_transmission_width: transmission never drops to the level");
  double lo = 0.0;
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

StorageBounds storage_bounds(double alpha, double gamma_bc) {
  if (!(alpha > 0.0)) throw ValidationError("storage_bounds: alpha must be > 0");
  if (!(gamma_bc >= 0.0)) throw ValidationError("storage_bounds: gamma_bc must be >= 0");
  const double r = std::sqrt(alpha);
  const bool unlimited = gamma_bc == 0.0;
  return {r, r, unlimited ? std::numeric_limits<double>::infinity() : 1.0 / gamma_bc, unlimited};
}

RefractiveIndex refractive_index(double omega, double vg0, double omega_ab) {
  if (!(vg0 > 0.0 && vg0 <= kSpeedOfLight))
    throw ValidationError("refractive_index: need 0 < vg0 <= c");
  if (!(omega_ab > 0.0)) throw ValidationError("refractive_index: omega_ab must be > 0");
  const double x = 1.0 + 2.0 * kSpeedOfLight / vg0 * (omega - omega_ab) / omega_ab;
  if (x >= 0.0) return {cd(std::sqrt(x), 0.0), false};
  return {cd(0.0, std::sqrt(-x)), true};
}

Reflection reflection(double omega, double vg0, double omega_ab) {
  const RefractiveIndex n = refractive_index(omega, vg0, omega_ab);
  const double exact = std::norm((1.0 - n.n) / (1.0 + n.n));
  const double dw = omega - omega_ab;
  const double den = 2.0 * vg0 / kSpeedOfLight * omega_ab + dw;
  const double approx = den != 0.0 ? dw * dw / (den * den) : std::numeric_limits<double>::infinity();
  return {exact, approx, n.evanescent};
}

PulseSpectrum pulse_spectrum(const std::vector<double>& t, const std::vector<cd>& E,
                             std::size_t pad_factor) {
  if (t.size() != E.size() || t.size() < 4)
    throw ValidationError("pulse_spectrum: need matching t and E with >= 4 samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs(t[i] - t[i - 1] - dt) > 1e-6 * dt)
      throw ValidationError("pulse_spectrum: samples must be uniform in time");
  std::size_t n = 1;
  while (n < std::max<std::size_t>(pad_factor, 1) * t.size()) n <<= 1;

  PulseSpectrum out;
  const std::size_t edge = std::max<std::size_t>(1, t.size() / 20);
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < E.size(); ++i) {
    const double p = std::norm(E[i]);
    total += p;
    if (i < edge || i + edge >= E.size()) outer += p;
  }
  out.edge_fraction = total > 0.0 ? outer / total : 0.0;
  out.truncated = out.edge_fraction > 1e-4;

  // S(omega) = |sum E_j e^{i omega t_j}|^2 dt^2: backward transform of the
  // padded series, times the phase of the record start (irrelevant for |.|^2).
  ComplexVector buf = ComplexVector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < E.size(); ++i) buf[static_cast<Eigen::Index>(i)] = E[i];
  Fft fft(n);
  const ComplexVector spec = fft.inverse(buf) * static_cast<double>(n);
  out.omega.resize(n);
  out.power.resize(n);
  const double dw = 2.0 * kPi / (static_cast<double>(n) * dt);
  for (std::size_t j = 0; j < n; ++j) {
    const long m = static_cast<long>((j + n / 2) % n) - static_cast<long>(n / 2);
    const std::size_t slot = static_cast<std::size_t>(m + static_cast<long>(n / 2));
    out.omega[slot] = dw * static_cast<double>(m);
    out.power[slot] = std::norm(spec[static_cast<Eigen::Index>(j)]) * dt * dt;
  }
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    s0 += out.power[j];
    s1 += out.power[j] * out.omega[j];
  }
  if (s0 == 0.0) return out;
  out.centroid = s1 / s0;
  double s2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = out.omega[j] - out.centroid;
    s2 += out.power[j] * d * d;
  }
  out.rms_width = std::sqrt(s2 / s0);

  const auto it = std::max_element(out.power.begin(), out.power.end());
  const std::size_t jp = static_cast<std::size_t>(it - out.power.begin());
  const double half = 0.5 * *it;
  std::size_t jl = jp, jr = jp;
  while (jl > 0 && out.power[jl] > half) --jl;
  while (jr + 1 < n && out.power[jr] > half) ++jr;
  auto cross = [&](std::size_t a, std::size_t b) {
    const double pa = out.power[a], pb = out.power[b];
    const double f = pa != pb ? (half - pa) / (pb - pa) : 0.0;
    return out.omega[a] + f * (out.omega[b] - out.omega[a]);
  };
  out.fwhm = cross(jr - 1, jr) - cross(jl + 1, jl);
  return out;
}

double spectral_shape_deviation(const PulseSpectrum& a, const PulseSpectrum& b) {
  if (a.omega.size() != b.omega.size() || a.omega.size() < 2)
    throw ValidationError("spectral_shape_deviation: frequency grids differ");
  const double dw = a.omega[1] - a.omega[0];
  if (std::abs((b.omega[1] - b.omega[0]) - dw) > 1e-9 * std::abs(dw))
    throw ValidationError("spectral_shape_deviation: frequency grids differ");
  const double ma = *std::max_element(a.power.begin(), a.power.end());
  const double mb = *std::max_element(b.power.begin(), b.power.end());
  if (ma == 0.0 || mb == 0.0) return ma == mb ? 0.0 : 1.0;
  const double shift = b.centroid - a.centroid;
  double worst = 0.0;
  const auto n = a.omega.size();
  for (std::size_t j = 0; j < n; ++j) {
    // Linear interpolation of b at omega_j + shift.
    const double x = (a.omega[j] + shift - b.omega[0]) / dw;
    double vb = 0.0;
    if (x >= 0.0 && x <= static_cast<double>(n - 1)) {
      const auto i = std::min(static_cast<std::size_t>(x), n - 2);
      const double f = x - static_cast<double>(i);
      vb = (1.0 - f) * b.power[i] + f * b.power[i + 1];
    }
    worst = std::max(worst, std::abs(a.power[j] / ma - vb / mb));
  }
  return worst;
}

double narrowing_ratio(double theta0, double theta1) {
  const double c0 = std::cos(theta0), c1 = std::cos(theta1);
  return (c1 * c1) / (c0 * c0);
}

double window_ratio(double theta0, double theta1) {
  const double t0 = std::tan(theta0), t1 = std::tan(theta1);
  return (t0 * t0) / (t1 * t1);
}

}  // namespace eitlab::spectra
