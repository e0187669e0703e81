#pragma once

#include <cmath>

namespace eitlab {

/// Value and first three derivatives of a scalar function of one variable.
///
/// Forward-mode differentiation used to get exact theta', theta'', theta'''
/// from the parametric control schedules.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  static constexpr Jet constant(double x) { return {x, 0.0, 0.0, 0.0}; }
  static constexpr Jet variable(double x) { return {x, 1.0, 0.0, 0.0}; }
};

/// Chain rule for f(u) given f and its first three derivatives at u.v.
inline Jet compose(const Jet& u, double f0, double f1, double f2, double f3) {
  const double u1 = u.d1;
  return {f0, f1 * u1, f2 * u1 * u1 + f1 * u.d2,
          f3 * u1 * u1 * u1 + 3.0 * f2 * u1 * u.d2 + f1 * u.d3};
}

inline Jet operator+(const Jet& a, const Jet& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
inline Jet operator-(const Jet& a, const Jet& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
inline Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }
inline Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
          a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}
inline Jet operator+(const Jet& a, double s) { return {a.v + s, a.d1, a.d2, a.d3}; }
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator-(const Jet& a, double s) { return {a.v - s, a.d1, a.d2, a.d3}; }
inline Jet operator-(double s, const Jet& a) { return {s - a.v, -a.d1, -a.d2, -a.d3}; }
inline Jet operator*(const Jet& a, double s) { return {a.v * s, a.d1 * s, a.d2 * s, a.d3 * s}; }
inline Jet operator*(double s, const Jet& a) { return a * s; }

inline Jet reciprocal(const Jet& a) {
  const double r = 1.0 / a.v;
  return compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, s, c, -s, -c);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, c, -s, -c, s);
}
inline Jet tanh(const Jet& a) {
  const double t = std::tanh(a.v);
  const double s = 1.0 - t * t;
  return compose(a, t, s, -2.0 * t * s, s * (4.0 * t * t - 2.0 * s));
}
inline Jet atan(const Jet& a) {
  const double x = a.v;
  const double q = 1.0 / (1.0 + x * x);
  return compose(a, std::atan(x), q, -2.0 * x * q * q, q * q * (8.0 * x * x * q - 2.0));
}
inline Jet sqrt(const Jet& a) {
  const double r = std::sqrt(a.v);
  return compose(a, r, 0.5 / r, -0.25 / (r * r * r), 0.375 / (r * r * r * r * r));
}
inline Jet square(const Jet& a) { return a * a; }

}  // namespace eitlab
