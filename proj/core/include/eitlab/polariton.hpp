#pragma once

#include <complex>
#include <string>
#include <vector>

#include "eitlab/fields.hpp"
#include "eitlab/grid.hpp"
#include "eitlab/medium.hpp"
#include "eitlab/schedule.hpp"

namespace eitlab {

enum class Projection {
  full,       // exact inverse rotation
  adiabatic,  // phi set to zero before the inverse rotation
};

/// psi = cos(theta) E - sin(theta) sbc e^{i dk z},
/// phi = sin(theta) E + cos(theta) sbc e^{i dk z}.
PolaritonField to_polariton(const FieldState& fs, double theta, const MediumParams& medium,
                            const Grid& grid);

/// Inverse rotation. Fills E and sbc; sba is returned as zero.
FieldState from_polariton(const PolaritonField& ps, double theta, const MediumParams& medium,
                          const Grid& grid, Projection projection = Projection::full);

/// Displacement c int_t0^t1 cos^2 theta dt.
double displacement(const ControlSchedule& schedule, double t0, double t1);

/// Amplitude factor exp(-gamma0 int_t0^t1 sin^2 theta dt).
double decay_factor(const ControlSchedule& schedule, const MediumParams& medium, double t0,
                    double t1);

/// Adiabatic (shape preserving) propagation of psi0 from t = 0 to t:
/// Fourier shift by the displacement and the gamma0 decay factor; phi = 0.
/// Throws WrapHazardError if the shifted support gets within `edge_cells`
/// of the domain edge.
PolaritonField ideal_propagate(const ComplexVector& psi0, const ControlSchedule& schedule,
                               const MediumParams& medium, const Grid& grid, double t,
                               double support_tolerance = 1e-6, std::size_t edge_cells = 5);

/// First-order non-adiabatic coefficients at one instant.
struct CoefficientSample {
  double A;  // (gamma + d/dt / 2) (thetadot^2 sin^2 theta / g2N)
  double B;  // (sin theta / 3 g2N) d^2/dt^2 sin^3 theta
  double C;  // (gamma + d/dt / 2) (sin^4 theta cos^2 theta / g2N)
  double D;  // sin^4 theta cos^4 theta / g2N
};

struct CorrectionCoefficients {
  std::vector<double> t;
  std::vector<double> A;
  std::vector<double> B;
  std::vector<double> C;
  std::vector<double> D;
  /// Human-readable notes, e.g. intervals where A < 0.
  std::vector<std::string> warnings;
};

/// gamma in A and C is the optical coherence decay gamma_ba.
CoefficientSample coefficients_at(const ControlSchedule& schedule, const MediumParams& medium,
                                  double t);

/// Coefficients on a time grid. For tabulated schedules the second
/// derivative of theta is estimated with steps h and 2h; a disagreement above
/// 5% of max |theta''| raises NumericalError (table too sparse).
CorrectionCoefficients correction_coefficients(const ControlSchedule& schedule,
                                               const MediumParams& medium,
                                               const std::vector<double>& times);

/// Time integrals entering the Fourier-space solution, over [t0, t1].
struct NonadiabaticIntegrals {
  double displacement = 0.0;    // c int cos^2 theta
  double B = 0.0;               // int B
  double D = 0.0;               // int D
  double A = 0.0;               // int A
  double C = 0.0;               // int C
  double decay_exponent = 0.0;  // gamma0 int sin^2 theta

  NonadiabaticIntegrals& operator+=(const NonadiabaticIntegrals& o);
};

NonadiabaticIntegrals nonadiabatic_integrals(const ControlSchedule& schedule,
                                             const MediumParams& medium, double t0, double t1);

/// Integrals from 0 to every entry of `times` (ascending), accumulated
/// segment by segment.
std::vector<NonadiabaticIntegrals> nonadiabatic_integral_series(const ControlSchedule& schedule,
                                                                const MediumParams& medium,
                                                                const std::vector<double>& times);

/// Per-mode factor applied to psi~(k, 0) (FFT convention psi(z) = sum psi~ e^{ikz}):
/// exp(-ik (x + c intB)) exp(+i k^3 c^3 intD) exp(-intA - k^2 c^2 intC) exp(-gamma0 int sin^2).
std::complex<double> nonadiabatic_factor(double k, const NonadiabaticIntegrals& in);

/// Applies the first-order non-adiabatic solution to psi0 at time t.
PolaritonField nonadiabatic_propagate(const ComplexVector& psi0, const ControlSchedule& schedule,
                                      const MediumParams& medium, const Grid& grid, double t,
                                      double wrap_tolerance = 1e-6, std::size_t edge_cells = 5);

/// Same for several times sharing one forward transform.
std::vector<PolaritonField> nonadiabatic_propagate_series(
    const ComplexVector& psi0, const ControlSchedule& schedule, const MediumParams& medium,
    const Grid& grid, const std::vector<double>& times, double wrap_tolerance = 1e-6,
    std::size_t edge_cells = 5);

/// Bright polariton to first order: sin^2 theta (gamma/g2N) thetadot psi
/// - sin^3 theta cos theta (gamma/g2N) c dpsi/dz.
ComplexVector bright_polariton_estimate(const ComplexVector& psi, const ControlSchedule& schedule,
                                        const MediumParams& medium, const Grid& grid, double t);

struct BoundaryJump {
  std::complex<double> psi_inside;  // sqrt(c / vg0) E(-0)
  double amplitude_factor;          // sqrt(c / vg0)
  double length_factor;             // vg0 / c: spatial compression of the pulse
};

/// Polariton amplitude just inside the entrance for a field E_in just outside.
BoundaryJump boundary_jump(std::complex<double> E_in, double vg0);

struct AdiabaticityReport {
  double pulse_length;
  double depth;
  /// gamma k^2 c^2 int sin^4 cos^2 / g2N dt at k = 1/L_p (must be << 1).
  double first_integral;
  /// gamma int thetadot^2 / (g2N + Omega^2) dt (must be << 1).
  double second_integral;
  /// (g2N / gamma c) L_p^2 / z: >> 1 when the depth is safely below the
  /// dispersion limit.
  double depth_budget;
  /// sqrt(alpha(z)) L_p, and z divided by it (must be << 1).
  double sqrt_alpha_length;
  double depth_margin;
  /// sqrt(alpha) of the whole medium: bound on L / L_p.
  double length_ratio_bound;
  /// Characteristic ramp time 1 / max |thetadot| (inf for static control).
  double ramp_time;
  /// ramp_time / ((l_abs / c)(vg0 / c)) (must be > 1).
  double ramp_margin;
  /// ramp_time c / L_p (must be >> 1 for Omega(t - z/c) ~ Omega(t)).
  double retardation_margin;
  bool adiabatic;  // both integrals below 0.1 and ramp_margin > 1
};

/// Evaluates the adiabaticity conditions over [0, grid.t_final()].
AdiabaticityReport adiabaticity_check(const ControlSchedule& schedule, const MediumParams& medium,
                                      const Grid& grid, double pulse_length, double depth);

}  // namespace eitlab
