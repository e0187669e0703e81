#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace eitlab {

using ComplexVector = Eigen::VectorXcd;

/// Field envelopes on a grid at one instant.
///
/// sba and sbc hold the collective amplitudes sqrt(N) sigma_ba and
/// sqrt(N) sigma_bc, so the single-atom coherence is sbc / sqrt(N).
struct FieldState {
  double t = 0.0;
  ComplexVector E;
  ComplexVector sba;
  ComplexVector sbc;

  static FieldState zeros(std::size_t nz, double t = 0.0);
  std::size_t size() const { return static_cast<std::size_t>(E.size()); }
  /// Throws ValidationError unless all arrays have length nz and are finite.
  void validate(std::size_t nz) const;
};

/// Dark (psi) and bright (phi) polariton amplitudes on a grid.
struct PolaritonField {
  double t = 0.0;
  ComplexVector psi;
  ComplexVector phi;

  static PolaritonField zeros(std::size_t nz, double t = 0.0);
  std::size_t size() const { return static_cast<std::size_t>(psi.size()); }
  void validate(std::size_t nz) const;
};

/// Largest single-atom population proxy |sigma_bc|^2 = |sbc|^2 / N.
double max_spin_population(const FieldState& fs, double atom_number);

}  // namespace eitlab
