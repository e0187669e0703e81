#pragma once

#include <limits>

namespace eitlab {

// All quantities use gamma = 1 (rates) and c = 1 (lengths in c/gamma) unless a
// caller converts explicitly.
inline constexpr double kSpeedOfLight = 1.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Parameters of a homogeneous Lambda medium.
///
/// The medium is parameterized by the collective coupling g^2 N only; the
/// opacity alpha = g^2 N L / (gamma c) is always derived from the stored
/// fields. `atom_number` is used exclusively for the weak-probe population
/// proxy |sigma_bc|^2 = |sqrt(N) sigma_bc|^2 / N.
class MediumParams {
 public:
  MediumParams(double g2N, double gamma, double length);

  /// Medium whose length is chosen so that alpha() reproduces `alpha`.
  static MediumParams with_opacity(double g2N, double alpha, double gamma = 1.0);

  [[nodiscard]] MediumParams with_gamma_ba(double gamma_ba) const;
  [[nodiscard]] MediumParams with_gamma0(double gamma0) const;
  [[nodiscard]] MediumParams with_delta_k(double delta_k) const;
  [[nodiscard]] MediumParams with_length(double length) const;
  [[nodiscard]] MediumParams with_atom_number(double atom_number) const;

  double g2N() const { return g2N_; }
  /// g sqrt(N)
  double collective_coupling() const;
  double gamma() const { return gamma_; }
  double gamma_ba() const { return gamma_ba_; }
  double gamma0() const { return gamma0_; }
  double length() const { return length_; }
  double delta_k() const { return delta_k_; }
  double atom_number() const { return atom_number_; }

  double alpha() const { return g2N_ * length_ / (gamma_ * kSpeedOfLight); }
  /// Opacity accumulated over an arbitrary propagation depth.
  double alpha_at(double depth) const { return g2N_ * depth / (gamma_ * kSpeedOfLight); }
  /// Resonant absorption length without EIT, c gamma / g^2 N.
  double absorption_length() const { return kSpeedOfLight * gamma_ / g2N_; }

 private:
  double g2N_;
  double gamma_;
  double gamma_ba_;
  double gamma0_ = 0.0;
  double length_;
  double delta_k_ = 0.0;
  double atom_number_ = 1e8;
};

/// theta = arctan(sqrt(g^2 N) / omega), in [0, pi/2]; omega = 0 gives pi/2.
double mixing_angle(double omega, const MediumParams& medium);

/// n_g = g^2 N / omega^2. Returns +infinity for omega == 0.
double group_index(double omega, const MediumParams& medium);

/// v_g = c / (1 + n_g) = c cos^2(theta).
double group_velocity(double omega, const MediumParams& medium);

inline bool is_infinite_group_index(double n_g) {
  return n_g == std::numeric_limits<double>::infinity();
}

}  // namespace eitlab
