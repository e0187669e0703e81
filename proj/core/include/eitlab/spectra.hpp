#pragma once

#include <complex>
#include <vector>

#include "eitlab/medium.hpp"

namespace eitlab::spectra {

/// chi(delta) = (n_g / kc) Omega^2 delta / (Omega^2 - delta^2 - i gamma delta),
/// n_g = g2N / Omega^2, gamma = gamma_ba.
std::complex<double> susceptibility(double delta, const MediumParams& medium, double omega_drive,
                                    double k);

/// True when |Omega^2 - delta^2 - i gamma delta| < rel * Omega^2 (the
/// response is dominated by the Autler-Townes pole).
bool near_pole(double delta, const MediumParams& medium, double omega_drive, double rel = 1e-6);

/// Rabi frequency giving group velocity v (0 < v < c): Omega^2 = g2N v / (c - v).
double rabi_for_group_velocity(double v, const MediumParams& medium);

struct Transmission {
  double exact;     // exp(-k z Im chi); k z Im chi does not depend on k
  double gaussian;  // exp(-delta^2 / width^2)
};

Transmission transmission(double delta, double depth, const MediumParams& medium,
                          double omega_drive);

struct TransparencyWidth {
  double width;             // (Omega^2 / gamma) / sqrt(alpha(l))
  double width_from_delay;  // sqrt(alpha(l)) / tau_d
  double delay;             // tau_d = n_g l / c
  double alpha;             // alpha(l) = g2N l / (gamma c)
};

TransparencyWidth transparency_width(const MediumParams& medium, double omega_drive, double depth);

/// Detuning delta > 0 where the exact-chi transmission falls to `level`
/// (default 1/e, the half-width matching `transparency_width`).
double measured_transmission_width(const MediumParams& medium, double omega_drive, double depth,
                                   double level = 0.36787944117144233);

struct StorageBounds {
  double delay_ratio;    // max tau_d / tau_p = sqrt(alpha)
  double length_ratio;   // max L / L_p = sqrt(alpha)
  double max_delay;      // 1 / gamma_bc (inf when gamma_bc = 0)
  bool dephasing_unlimited;
};

StorageBounds storage_bounds(double alpha, double gamma_bc);

inline constexpr double kDefaultCarrier = 1e5;

struct RefractiveIndex {
  std::complex<double> n;  // purely imaginary in the evanescent region
  bool evanescent;
};

/// n = sqrt(1 + (2c / vg0)(omega - omega_ab) / omega_ab).
RefractiveIndex refractive_index(double omega, double vg0, double omega_ab = kDefaultCarrier);

struct Reflection {
  double exact;           // |(1 - n) / (1 + n)|^2
  double near_resonance;  // dw^2 / (2 (vg0/c) omega_ab + dw)^2, dw = omega - omega_ab
  bool evanescent;
};

Reflection reflection(double omega, double vg0, double omega_ab = kDefaultCarrier);

struct PulseSpectrum {
  std::vector<double> omega;  // ascending
  std::vector<double> power;  // S(omega) = |int E(t) e^{i omega t} dt|^2
  double centroid = 0.0;
  double rms_width = 0.0;
  double fwhm = 0.0;
  /// Fraction of |E|^2 in the outer 5% of the record on each side.
  double edge_fraction = 0.0;
  bool truncated = false;  // edge_fraction above 1e-4
};

/// Rectangular-window DFT of a uniformly sampled series E(z0, t), zero padded
/// to at least pad_factor times its length.
PulseSpectrum pulse_spectrum(const std::vector<double>& t, const std::vector<std::complex<double>>& E,
                             std::size_t pad_factor = 8);

/// max |S_a/max S_a - S_b/max S_b| after aligning the centroids; spectra
/// must share the frequency grid.
double spectral_shape_deviation(const PulseSpectrum& a, const PulseSpectrum& b);

/// Expected bandwidth ratio cos^2 theta(t) / cos^2 theta(0) of a pulse whose
/// group velocity changes from cos^2 theta0 to cos^2 theta1.
double narrowing_ratio(double theta0, double theta1);

/// Delta omega_tr(t) / Delta omega_tr(0) = cot^2 theta(t) / cot^2 theta(0) at fixed depth.
double window_ratio(double theta0, double theta1);

}  // namespace eitlab::spectra
