#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace eitlab {

/// Uniform periodic spatial grid plus a fixed time step.
///
/// nz must be a power of two. dz = (z_max - z_min) / nz, so z_max itself is
/// not a sample (periodic wrap). dt must satisfy dt <= 0.5 dz / c.
class Grid {
 public:
  Grid(double z_min, double z_max, std::size_t nz, double dt, double t_final);

  /// Grid whose dt is `cfl` * dz / c (cfl <= 0.5).
  static Grid with_cfl(double z_min, double z_max, std::size_t nz, double t_final,
                       double cfl = 0.5);

  [[nodiscard]] Grid with_t_final(double t_final) const;

  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }
  std::size_t nz() const { return nz_; }
  double dt() const { return dt_; }
  double t_final() const { return t_final_; }
  double dz() const { return (z_max_ - z_min_) / static_cast<double>(nz_); }
  double length() const { return z_max_ - z_min_; }

  double z(std::size_t i) const { return z_min_ + dz() * static_cast<double>(i); }
  Eigen::VectorXd positions() const;
  /// Angular wavenumbers in FFT order; the Nyquist entry is reported as
  /// -pi/dz.
  Eigen::VectorXd wavenumbers() const;
  double k_max() const;

  /// Number of integration steps: ceil(t_final / dt).
  std::size_t steps() const;
  /// Actual step t_final / steps() (<= dt).
  double step() const;

  /// Index of the grid point nearest to z (clamped to the grid).
  std::size_t nearest_index(double z) const;

  bool same_layout(const Grid& other) const;

 private:
  double z_min_;
  double z_max_;
  std::size_t nz_;
  double dt_;
  double t_final_;
};

}  // namespace eitlab
