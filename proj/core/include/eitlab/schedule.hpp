#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eitlab/jet.hpp"
#include "eitlab/medium.hpp"

namespace eitlab {

/// cot(theta) = a (1 - b tanh[c (t - t1)] + b tanh[c (t - t2)]).
/// t1 = -inf or t2 = +inf give one-sided ramps. b must lie in [0, 0.5].
struct TanhRamp {
  double a = 1.0;
  double b = 0.5;
  double c = 1.0;
  double t1 = 0.0;
  double t2 = std::numeric_limits<double>::infinity();
};

/// cot(theta) = a (1 - (2/pi) arccot[s (1 - b tanh[c (t - t1)] + b tanh[c (t - t2)])]).
struct ArccotTanh {
  double a = 1.0;
  double s = 1.0;
  double b = 0.5;
  double c = 1.0;
  double t1 = 0.0;
  double t2 = 0.0;
};

struct ConstantCot {
  double cot = 0.0;
};

/// Tabulated (t, cot theta) samples, monotone cubic Hermite interpolation.
struct TabulatedCot {
  std::vector<double> t;
  std::vector<double> cot;
  std::vector<double> slope;  // Hermite node derivatives
};

/// Instantaneous control quantities derived from a schedule.
struct ScheduleSample {
  double cot_theta;
  double theta;
  double omega;           // Rabi frequency sqrt(g^2 N) cot(theta)
  double group_velocity;  // c cos^2(theta)
};

/// Time-dependent control field, stored as cot(theta(t)).
///
/// theta in [0, pi/2] at all times: every family keeps cot(theta) >= 0.
class ControlSchedule {
 public:
  static ControlSchedule constant_cot(double cot);
  static ControlSchedule constant_rabi(double omega, const MediumParams& medium);
  static ControlSchedule tanh_ramp(const TanhRamp& p);
  static ControlSchedule arccot_tanh(const ArccotTanh& p);
  /// Requires strictly increasing times, cot >= 0, at least two samples.
  static ControlSchedule tabulated(std::vector<double> t, std::vector<double> cot);
  /// Samples `source` on n uniform points over [t0, t1].
  static ControlSchedule sampled(const ControlSchedule& source, double t0, double t1,
                                 std::size_t n);

  /// Smooth 0 -> pi/2 rotation over [0, duration]: cot goes from ~cot_start
  /// down to ~cot_start * 6e-6.
  static ControlSchedule storage_ramp(double duration, double cot_start = 100.0);
  /// Reverse of storage_ramp (pi/2 -> 0).
  static ControlSchedule retrieval_ramp(double duration, double cot_end = 100.0);

  double cot_theta(double t) const;
  double theta(double t) const;
  /// theta and its first three time derivatives. Analytic for the parametric
  /// families, 4th-order central differences for tabulated data.
  Jet theta_jet(double t) const;
  /// Derivatives of theta by 4th-order central differences with step h (any
  /// family; stencils are clamped to the tabulated domain).
  Jet finite_difference_theta_jet(double t, double h) const;

  bool is_tabulated() const { return std::holds_alternative<TabulatedCot>(rep_); }
  bool is_constant() const { return std::holds_alternative<ConstantCot>(rep_); }
  /// [t_min, t_max] for tabulated data, (-inf, inf) otherwise.
  std::pair<double, double> domain() const;
  /// Smallest spacing of the tabulated samples; 0 for parametric families.
  double table_spacing() const;

  std::string family() const;
  /// Family name plus parameters, e.g. "tanh-ramp a=100 b=0.5 ...".
  std::string describe() const;

  const std::variant<ConstantCot, TanhRamp, ArccotTanh, TabulatedCot>& representation() const {
    return rep_;
  }

 private:
  explicit ControlSchedule(std::variant<ConstantCot, TanhRamp, ArccotTanh, TabulatedCot> rep)
      : rep_(std::move(rep)) {}
  Jet tabulated_theta_jet(const TabulatedCot& tab, double t) const;

  std::variant<ConstantCot, TanhRamp, ArccotTanh, TabulatedCot> rep_;
};

/// Omega, theta and v_g at time t, mutually consistent through mixing_angle.
ScheduleSample eval_schedule(const ControlSchedule& s, const MediumParams& medium, double t);

namespace presets {

/// Stop-and-release: cot = 100(1 - 0.5 tanh[0.1(t-15)] + 0.5 tanh[0.1(t-125)]).
ControlSchedule stop_and_release_fig3();

/// cot = 0.363(1 - (2/pi) arccot[5(1 - 0.5 tanh[0.005(t-2000)] + 0.5 tanh[0.005(t-3200)])]).
ControlSchedule stop_and_release_fig6();

}  // namespace presets

}  // namespace eitlab
