#pragma once

#include <functional>

namespace eitlab {

inline constexpr double kQuadratureTolerance = 1e-9;

/// Adaptive Gauss-Kronrod integral of f over [a, b] (b < a gives the
/// negated integral). Throws NumericalError if the error estimate stays
/// above tol * max(1, |result|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = kQuadratureTolerance);

}  // namespace eitlab
