#include "eitlab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eitlab/errors.hpp"

namespace eitlab {
namespace {

template <class T>
T tanh_ramp_cot(const TanhRamp& p, const T& t) {
  using std::tanh;
  return p.a * (1.0 - p.b * tanh(p.c * (t - p.t1)) + p.b * tanh(p.c * (t - p.t2)));
}

// arccot(x) = pi/2 - atan(x), so the family collapses to (2a/pi) atan(inner).
template <class T>
T arccot_tanh_cot(const ArccotTanh& p, const T& t) {
  using std::atan;
  using std::tanh;
  const T inner = p.s * (1.0 - p.b * tanh(p.c * (t - p.t1)) + p.b * tanh(p.c * (t - p.t2)));
  return (2.0 * p.a / kPi) * atan(inner);
}

double theta_from_cot(double cot) { return 0.5 * kPi - std::atan(cot); }
Jet theta_from_cot(const Jet& cot) { return 0.5 * kPi - atan(cot); }

// Weights of the first derivative at x of the Lagrange polynomial through xs.
double lagrange_slope(double x, std::span<const double> xs, std::span<const double> fs) {
  const std::size_t n = xs.size();
  double slope = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double w = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      double p = 1.0 / (xs[j] - xs[m]);
      for (std::size_t l = 0; l < n; ++l) {
        if (l != j && l != m) p *= (x - xs[l]) / (xs[j] - xs[l]);
      }
      w += p;
    }
    slope += w * fs[j];
  }
  return slope;
}

// Node slopes from a 5-point stencil, then the Hyman filter so the Hermite
// interpolant stays monotone wherever the data is.
std::vector<double> monotone_slopes(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  const std::size_t width = std::min<std::size_t>(5, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
    lo = std::min(lo, n - width);
    d[i] = lagrange_slope(t[i], std::span(t).subspan(lo, width), std::span(y).subspan(lo, width));
  }
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? secant[i - 1] : secant[0];
    const double right = i + 1 < n ? secant[i] : secant[n - 2];
    if (left * right <= 0.0) {
      d[i] = 0.0;
      continue;
    }
    const double sign = left > 0.0 ? 1.0 : -1.0;
    const double bound = 3.0 * std::min(std::abs(left), std::abs(right));
    if (d[i] * sign < 0.0) {
      d[i] = 0.0;
    } else if (std::abs(d[i]) > bound) {
      d[i] = sign * bound;
    }
  }
  return d;
}

double hermite_eval(const TabulatedCot& tab, double t) {
  const auto& ts = tab.t;
  const double span = ts.back() - ts.front();
  const double slack = 1e-12 * std::max(1.0, span);
  if (t < ts.front() - slack || t > ts.back() + slack) {
    std::ostringstream msg;
    msg << "tabulated schedule evaluated at t=" << t << " outside [" << ts.front() << ", "
        << ts.back() << "]";
    throw ValidationError(msg.str());
  }
  t = std::clamp(t, ts.front(), ts.back());
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t i = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
  if (i >= ts.size() - 1) i = ts.size() - 2;
  const double h = ts[i + 1] - ts[i];
  const double s = (t - ts[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  const double v = h00 * tab.cot[i] + h10 * h * tab.slope[i] + h01 * tab.cot[i + 1] +
                   h11 * h * tab.slope[i + 1];
  return std::max(v, 0.0);
}

void check_ramp(double a, double b, double c, const char* family) {
  if (!(std::isfinite(a) && a >= 0.0))
    throw ValidationError(std::string(family) + ": amplitude a must be finite and >= 0");
  if (!(b >= 0.0 && b <= 0.5))
    throw ValidationError(std::string(family) + ": b must lie in [0, 0.5] to keep cot >= 0");
  if (!(std::isfinite(c) && c > 0.0))
    throw ValidationError(std::string(family) + ": rate c must be finite and > 0");
}

}  // namespace

ControlSchedule ControlSchedule::constant_cot(double cot) {
  if (!(std::isfinite(cot) && cot >= 0.0))
    throw ValidationError("constant schedule: cot(theta) must be finite and >= 0");
  return ControlSchedule(ConstantCot{cot});
}

ControlSchedule ControlSchedule::constant_rabi(double omega, const MediumParams& medium) {
  if (!(std::isfinite(omega) && omega >= 0.0))
    throw ValidationError("constant schedule: omega must be finite and >= 0");
  return constant_cot(omega / medium.collective_coupling());
}

ControlSchedule ControlSchedule::tanh_ramp(const TanhRamp& p) {
  check_ramp(p.a, p.b, p.c, "tanh-ramp");
  if (std::isnan(p.t1) || std::isnan(p.t2)) throw ValidationError("tanh-ramp: t1/t2 are NaN");
  return ControlSchedule(p);
}

ControlSchedule ControlSchedule::arccot_tanh(const ArccotTanh& p) {
  check_ramp(p.a, p.b, p.c, "arccot-tanh");
  if (!(std::isfinite(p.s) && p.s >= 0.0))
    throw ValidationError("arccot-tanh: scale s must be finite and >= 0");
  if (std::isnan(p.t1) || std::isnan(p.t2)) throw ValidationError("arccot-tanh: t1/t2 are NaN");
  return ControlSchedule(p);
}

ControlSchedule ControlSchedule::tabulated(std::vector<double> t, std::vector<double> cot) {
  if (t.size() != cot.size()) throw ValidationError("tabulated schedule: t and cot differ in length");
  if (t.size() < 2) throw ValidationError("tabulated schedule: need at least two samples");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(cot[i]))
      throw ValidationError("tabulated schedule: non-finite sample");
    if (cot[i] < 0.0) throw ValidationError("tabulated schedule: cot(theta) must be >= 0");
    if (i > 0 && !(t[i] > t[i - 1]))
      throw ValidationError("tabulated schedule: times must be strictly increasing");
  }
  TabulatedCot tab{std::move(t), std::move(cot), {}};
  tab.slope = monotone_slopes(tab.t, tab.cot);
  return ControlSchedule(std::move(tab));
}

ControlSchedule ControlSchedule::sampled(const ControlSchedule& source, double t0, double t1,
                                         std::size_t n) {
  if (n < 2 || !(t1 > t0)) throw ValidationError("sampled schedule: need n >= 2 and t1 > t0");
  std::vector<double> ts(n), cs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    cs[i] = source.cot_theta(ts[i]);
  }
  return tabulated(std::move(ts), std::move(cs));
}

ControlSchedule ControlSchedule::storage_ramp(double duration, double cot_start) {
  if (!(duration > 0.0)) throw ValidationError("storage_ramp: duration must be > 0");
  return tanh_ramp({cot_start, 0.5, 12.0 / duration, 0.5 * duration,
                    std::numeric_limits<double>::infinity()});
}

ControlSchedule ControlSchedule::retrieval_ramp(double duration, double cot_end) {
  if (!(duration > 0.0)) throw ValidationError("retrieval_ramp: duration must be > 0");
  return tanh_ramp({cot_end, 0.5, 12.0 / duration, -std::numeric_limits<double>::infinity(),
                    0.5 * duration});
}

double ControlSchedule::cot_theta(double t) const {
  return std::visit(
      [t](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantCot>) {
          return p.cot;
        } else if constexpr (std::is_same_v<P, TanhRamp>) {
          return std::max(tanh_ramp_cot(p, t), 0.0);
        } else if constexpr (std::is_same_v<P, ArccotTanh>) {
          return std::max(arccot_tanh_cot(p, t), 0.0);
        } else {
          return hermite_eval(p, t);
        }
      },
      rep_);
}

double ControlSchedule::theta(double t) const { return theta_from_cot(cot_theta(t)); }

Jet ControlSchedule::theta_jet(double t) const {
  return std::visit(
      [this, t](const auto& p) -> Jet {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantCot>) {
          return Jet::constant(theta_from_cot(p.cot));
        } else if constexpr (std::is_same_v<P, TanhRamp>) {
          return theta_from_cot(tanh_ramp_cot(p, Jet::variable(t)));
        } else if constexpr (std::is_same_v<P, ArccotTanh>) {
          return theta_from_cot(arccot_tanh_cot(p, Jet::variable(t)));
        } else {
          return tabulated_theta_jet(p, t);
        }
      },
      rep_);
}

Jet ControlSchedule::finite_difference_theta_jet(double t, double h) const {
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be > 0");
  const auto [lo, hi] = domain();
  auto f = [&](double x) { return theta(std::clamp(x, lo, hi)); };
  const double fm3 = f(t - 3 * h), fm2 = f(t - 2 * h), fm1 = f(t - h), f0 = f(t);
  const double fp1 = f(t + h), fp2 = f(t + 2 * h), fp3 = f(t + 3 * h);
  Jet j;
  j.v = f0;
  j.d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
  j.d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
  j.d3 = (-fp3 + 8 * fp2 - 13 * fp1 + 13 * fm1 - 8 * fm2 + fm3) / (8 * h * h * h);
  return j;
}

Jet ControlSchedule::tabulated_theta_jet(const TabulatedCot& tab, double t) const {
  (void)tab;
  return finite_difference_theta_jet(t, 0.5 * table_spacing());
}

std::pair<double, double> ControlSchedule::domain() const {
  if (const auto* tab = std::get_if<TabulatedCot>(&rep_)) return {tab->t.front(), tab->t.back()};
  return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

double ControlSchedule::table_spacing() const {
  const auto* tab = std::get_if<TabulatedCot>(&rep_);
  if (tab == nullptr) return 0.0;
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < tab->t.size(); ++i) h = std::min(h, tab->t[i] - tab->t[i - 1]);
  return h;
}

std::string ControlSchedule::family() const {
  return std::visit(
      [](const auto& p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantCot>) return "constant";
        else if constexpr (std::is_same_v<P, TanhRamp>) return "tanh-ramp";
        else if constexpr (std::is_same_v<P, ArccotTanh>) return "arccot-tanh";
        else return "tabulated";
      },
      rep_);
}

std::string ControlSchedule::describe() const {
  std::ostringstream out;
  out.precision(12);
  out << family();
  std::visit(
      [&out](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantCot>) {
          out << " cot=" << p.cot;
        } else if constexpr (std::is_same_v<P, TanhRamp>) {
          out << " a=" << p.a << " b=" << p.b << " c=" << p.c << " t1=" << p.t1 << " t2=" << p.t2;
        } else if constexpr (std::is_same_v<P, ArccotTanh>) {
          out << " a=" << p.a << " s=" << p.s << " b=" << p.b << " c=" << p.c << " t1=" << p.t1
              << " t2=" << p.t2;
        } else {
          out << " samples=" << p.t.size() << " t=[" << p.t.front() << ", " << p.t.back() << "]";
        }
      },
      rep_);
  return out.str();
}

ScheduleSample eval_schedule(const ControlSchedule& s, const MediumParams& medium, double t) {
  const double cot = s.cot_theta(t);
  const double omega = medium.collective_coupling() * cot;
  const double theta = mixing_angle(omega, medium);
  const double c = std::cos(theta);
  return {cot, theta, omega, kSpeedOfLight * c * c};
}

namespace presets {

ControlSchedule stop_and_release_fig3() {
  return ControlSchedule::tanh_ramp({100.0, 0.5, 0.1, 15.0, 125.0});
}

ControlSchedule stop_and_release_fig6() {
  return ControlSchedule::arccot_tanh({0.363, 5.0, 0.5, 0.005, 2000.0, 3200.0});
}

}  // namespace presets

}  // namespace eitlab
