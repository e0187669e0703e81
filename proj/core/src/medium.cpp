#include "eitlab/medium.hpp"

#include <cmath>
#include <string>

#include "eitlab/errors.hpp"

namespace eitlab {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("MediumParams: " + what);
}

}  // namespace

MediumParams::MediumParams(double g2N, double gamma, double length)
    : g2N_(g2N), gamma_(gamma), gamma_ba_(gamma), length_(length) {
  require(std::isfinite(g2N) && g2N > 0.0, "g2N must be > 0");
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
  require(std::isfinite(length) && length > 0.0, "length must be > 0");
}

MediumParams MediumParams::with_opacity(double g2N, double alpha, double gamma) {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
  require(std::isfinite(g2N) && g2N > 0.0, "g2N must be > 0");
  return MediumParams(g2N, gamma, alpha * gamma * kSpeedOfLight / g2N);
}

MediumParams MediumParams::with_gamma_ba(double gamma_ba) const {
  require(std::isfinite(gamma_ba) && gamma_ba >= 0.0, "gamma_ba must be >= 0");
  MediumParams m = *this;
  m.gamma_ba_ = gamma_ba;
  return m;
}

MediumParams MediumParams::with_gamma0(double gamma0) const {
  require(std::isfinite(gamma0) && gamma0 >= 0.0, "gamma0 must be >= 0");
  MediumParams m = *this;
  m.gamma0_ = gamma0;
  return m;
}

MediumParams MediumParams::with_delta_k(double delta_k) const {
  require(std::isfinite(delta_k), "delta_k must be finite");
  MediumParams m = *this;
  m.delta_k_ = delta_k;
  return m;
}

MediumParams MediumParams::with_length(double length) const {
  require(std::isfinite(length) && length > 0.0, "length must be > 0");
  MediumParams m = *this;
  m.length_ = length;
  return m;
}

MediumParams MediumParams::with_atom_number(double atom_number) const {
  require(std::isfinite(atom_number) && atom_number >= 1.0, "atom_number must be >= 1");
  MediumParams m = *this;
  m.atom_number_ = atom_number;
  return m;
}

double MediumParams::collective_coupling() const { return std::sqrt(g2N_); }

double mixing_angle(double omega, const MediumParams& medium) {
  if (!(omega >= 0.0)) throw ValidationError("mixing_angle: omega must be >= 0");
  if (std::isinf(omega)) return 0.0;
  return std::atan2(medium.collective_coupling(), omega);
}

double group_index(double omega, const MediumParams& medium) {
  if (!(omega >= 0.0)) throw ValidationError("group_index: omega must be >= 0");
  if (omega == 0.0) return std::numeric_limits<double>::infinity();
  return medium.g2N() / (omega * omega);
}

double group_velocity(double omega, const MediumParams& medium) {
  const double n_g = group_index(omega, medium);
  if (is_infinite_group_index(n_g)) return 0.0;
  return kSpeedOfLight / (1.0 + n_g);
}

}  // namespace eitlab
