#include "eitlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eitlab/errors.hpp"
#include "eitlab/medium.hpp"

namespace eitlab {

Grid::Grid(double z_min, double z_max, std::size_t nz, double dt, double t_final)
    : z_min_(z_min), z_max_(z_max), nz_(nz), dt_(dt), t_final_(t_final) {
  if (!(std::isfinite(z_min) && std::isfinite(z_max) && z_max > z_min))
    throw ValidationError("grid: need finite z_min < z_max");
  if (nz < 4 || (nz & (nz - 1)) != 0)
    throw ValidationError("grid: nz must be a power of two >= 4");
  if (!(std::isfinite(dt) && dt > 0.0)) throw ValidationError("grid: dt must be > 0");
  if (!(std::isfinite(t_final) && t_final >= 0.0))
    throw ValidationError("grid: t_final must be finite and >= 0");
  const double bound = 0.5 * dz() / kSpeedOfLight;
  if (dt > bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "grid: CFL violation, dt=" << dt << " exceeds 0.5*dz/c=" << bound;
    throw ValidationError(msg.str());
  }
}

Grid Grid::with_cfl(double z_min, double z_max, std::size_t nz, double t_final, double cfl) {
  if (!(cfl > 0.0 && cfl <= 0.5)) throw ValidationError("grid: cfl factor must be in (0, 0.5]");
  const double dz = (z_max - z_min) / static_cast<double>(nz);
  return Grid(z_min, z_max, nz, cfl * dz / kSpeedOfLight, t_final);
}

Grid Grid::with_t_final(double t_final) const { return Grid(z_min_, z_max_, nz_, dt_, t_final); }

Eigen::VectorXd Grid::positions() const {
  Eigen::VectorXd z(static_cast<Eigen::Index>(nz_));
  for (std::size_t i = 0; i < nz_; ++i) z[static_cast<Eigen::Index>(i)] = this->z(i);
  return z;
}

Eigen::VectorXd Grid::wavenumbers() const {
  Eigen::VectorXd k(static_cast<Eigen::Index>(nz_));
  const double dk = 2.0 * kPi / length();
  const auto n = static_cast<long>(nz_);
  for (long i = 0; i < n; ++i) {
    const long m = i < n / 2 ? i : i - n;
    k[i] = dk * static_cast<double>(m);
  }
  return k;
}

double Grid::k_max() const { return kPi / dz(); }

std::size_t Grid::steps() const {
  if (t_final_ == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(t_final_ / dt_ - 1e-9));
}

double Grid::step() const {
  const std::size_t n = steps();
  return n == 0 ? dt_ : t_final_ / static_cast<double>(n);
}

std::size_t Grid::nearest_index(double z) const {
  const double x = std::round((z - z_min_) / dz());
  return static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(nz_ - 1)));
}

bool Grid::same_layout(const Grid& other) const {
  return nz_ == other.nz_ && std::abs(z_min_ - other.z_min_) <= 1e-12 * length() &&
         std::abs(z_max_ - other.z_max_) <= 1e-12 * length();
}

}  // namespace eitlab
