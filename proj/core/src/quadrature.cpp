#include "eitlab/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "eitlab/errors.hpp"

namespace eitlab {

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, tol);
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 25, tol, &error, &l1);
  if (!std::isfinite(value)) throw NumericalError("quadrature: non-finite integral");
  if (error > 10.0 * tol * std::max(1.0, l1)) {
    std::ostringstream msg;
    msg << "quadrature: error estimate " << error << " above tolerance on [" << a << ", " << b
        << "]";
    throw NumericalError(msg.str());
  }
  return value;
}

}  // namespace eitlab
