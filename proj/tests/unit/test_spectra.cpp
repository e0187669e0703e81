#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eitlab/errors.hpp"
#include "eitlab/spectra.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace eitlab;
using namespace eitlab::spectra;
using eitlab::oracle::Gen;

namespace {

using cd = std::complex<double>;

// Susceptibility of the resonantly driven three-level medium, written out
// from the closed form n_g / (k c) * |Omega|^2 delta / (|Omega|^2 - delta^2 - i gamma delta).
cd chi_reference(double delta, double g2N, double gamma, double omega, double k) {
  const double ng = g2N / (omega * omega);
  return ng / k * omega * omega * delta / cd(omega * omega - delta * delta, -gamma * delta);
}

}  // namespace

TEST(Susceptibility, MatchesClosedForm) {
  Gen gen(41);
  for (int i = 0; i < 200; ++i) {
    const double g2N = gen.log_uniform(0.1, 100.0), gb = gen.uniform(0.2, 3.0);
    const auto med = MediumParams(g2N, 1.0, 10.0).with_gamma_ba(gb);
    const double om = gen.log_uniform(0.05, 5.0), k = gen.log_uniform(1.0, 1e5);
    const double d = gen.uniform(-3.0, 3.0);
    const cd got = susceptibility(d, med, om, k);
    const cd want = chi_reference(d, g2N, gb, om, k);
    EXPECT_LT(std::abs(got - want), 1e-12 * std::abs(want) + 1e-300);
  }
}

TEST(Susceptibility, TransparentAtResonanceAndPassive) {
  Gen gen(42);
  const MediumParams med(10.0, 1.0, 2.0);
  EXPECT_EQ(susceptibility(0.0, med, 0.5, 1.0), cd(0.0, 0.0));
  for (int i = 0; i < 500; ++i) {
    const double om = gen.log_uniform(0.01, 10.0), d = gen.uniform(-20.0, 20.0);
    const cd x = susceptibility(d, med, om, 1.0);
    EXPECT_GE(x.imag(), 0.0);
    const cd y = susceptibility(-d, med, om, 1.0);
    EXPECT_LT(std::abs(y + std::conj(x)), 1e-12 * (1.0 + std::abs(x)));
  }
}

TEST(Susceptibility, SmallDetuningSeries) {
  const MediumParams med(10.0, 1.0, 2.0);
  const double om = 0.8;
  for (double d : {1e-4, 1e-3}) {
    const cd x = susceptibility(d, med, om, 1.0);
    EXPECT_NEAR(x.imag() / x.real(), d / (om * om), 1e-3 * d / (om * om) + 1e-12);
  }
  EXPECT_TRUE(near_pole(0.8, med, 0.8, 1e-6) == false);
  EXPECT_THROW(susceptibility(0.1, med, 0.0, 1.0), ValidationError);
}

TEST(Transmission, ResonanceAndWidthIdentities) {
  const MediumParams med(10.0, 1.0, 2.0);
  for (double om : {0.1, 0.3, 1.0}) {
    const auto T0 = transmission(0.0, 2.0, med, om);
    EXPECT_EQ(T0.exact, 1.0);
    EXPECT_EQ(T0.gaussian, 1.0);
    const auto w = transparency_width(med, om, 2.0);
    EXPECT_NEAR(transmission(w.width, 2.0, med, om).gaussian, std::exp(-1.0), 1e-14);
  }
  const auto w = transparency_width(MediumParams(100.0, 1.0, 1.0), 1.0, 1.0);
  EXPECT_NEAR(w.width, 0.1, 1e-14);
  const auto half = transparency_width(MediumParams(100.0, 1.0, 1.0), 1.0 / std::sqrt(2.0), 1.0);
  EXPECT_NEAR(half.width / w.width, 0.5, 1e-14);
}

TEST(Transmission, WidthFromDelayAgrees) {
  Gen gen(43);
  for (int i = 0; i < 200; ++i) {
    const MediumParams med(gen.log_uniform(0.1, 100.0), 1.0, 1.0);
    const double om = gen.log_uniform(0.01, 10.0), depth = gen.log_uniform(0.1, 1e3);
    const auto w = transparency_width(med, om, depth);
    EXPECT_NEAR(w.width_from_delay / w.width, 1.0, 1e-12);
  }
}

TEST(Transmission, MeasuredWidthAgreesWithBisection) {
  Gen gen(44);
  for (int i = 0; i < 50; ++i) {
    const double g2N = gen.log_uniform(1.0, 100.0), depth = gen.log_uniform(1.0, 100.0);
    const MediumParams med(g2N, 1.0, depth);
    const double om = gen.log_uniform(0.05, 1.0);
    auto exponent = [&](double d) {
      return chi_reference(d, g2N, 1.0, om, 1.0).imag() * depth - 1.0;
    };
    if (exponent(om) < 0.0) continue;
    const double want = oracle::bisect(exponent, 0.0, om, 1e-14);
    EXPECT_NEAR(measured_transmission_width(med, om, depth), want, 1e-9 * want);
  }
}

TEST(Transmission, GaussianLawHoldsOverTheWindowFamily) {
  const MediumParams med(10.0, 1.0, 2.0);
  for (double v : {0.08, 0.04, 0.02, 0.01}) {
    const double om = rabi_for_group_velocity(v, med);
    const double want = transparency_width(med, om, 2.0).width;
    EXPECT_NEAR(measured_transmission_width(med, om, 2.0) / want, 1.0, 0.05) << v;
    for (double x : {0.25, 0.5, 0.75, 1.0}) {
      const auto T = transmission(x * want, 2.0, med, om);
      EXPECT_NEAR(T.exact / T.gaussian, 1.0, 0.05) << v << " " << x;
    }
  }
}

TEST(Transmission, WindowNarrowsAsTheGroupVelocityFalls) {
  const MediumParams med(10.0, 1.0, 2.0);
  double prev = 1e300;
  for (double v : {0.08, 0.04, 0.02, 0.01}) {
    const double w = measured_transmission_width(med, rabi_for_group_velocity(v, med), 2.0);
    EXPECT_LT(w, prev);
    prev = w;
  }
}

TEST(Transmission, GaussianOverestimatesBetweenTwoWidthsAndTheSwitchPoint) {
  // T_gauss > T_exact iff delta^2 < 2 Omega^2 - gamma^2.
  Gen gen(45);
  for (int i = 0; i < 200; ++i) {
    const MediumParams med(gen.log_uniform(1.0, 100.0), 1.0, 1.0);
    const double om = gen.uniform(1.0, 5.0);
    const double depth = gen.log_uniform(10.0, 1e3);
    const double w = transparency_width(med, om, depth).width;
    const double edge = std::sqrt(2.0 * om * om - 1.0);
    if (2.0 * w >= edge) continue;
    const double inside = gen.uniform(2.0 * w, edge);
    const auto Ti = transmission(inside, depth, med, om);
    EXPECT_GE(Ti.gaussian, Ti.exact);
    const double outside = edge * gen.uniform(1.01, 3.0);
    const auto To = transmission(outside, depth, med, om);
    EXPECT_LE(To.gaussian, To.exact);
  }
}

TEST(Bounds, SquareRootOfOpacity) {
  const auto b = storage_bounds(1e4, 1e-3);
  EXPECT_EQ(b.delay_ratio, 100.0);
  EXPECT_EQ(b.length_ratio, 100.0);
  EXPECT_NEAR(b.max_delay, 1e3, 1e-9);
  EXPECT_FALSE(b.dephasing_unlimited);
  EXPECT_EQ(storage_bounds(625.0, 0.0).delay_ratio, 25.0);
  EXPECT_TRUE(storage_bounds(625.0, 0.0).dephasing_unlimited);
  EXPECT_THROW(storage_bounds(-1.0, 0.0), ValidationError);
  EXPECT_THROW(storage_bounds(1.0, -1.0), ValidationError);
}

TEST(Bounds, DelayBoundIsTheMeasuredWindow) {
  // tau_d * width = sqrt(alpha): a pulse of duration 1/width is delayed by at
  // most sqrt(alpha) pulse lengths.
  Gen gen(46);
  for (int i = 0; i < 100; ++i) {
    const MediumParams med(gen.log_uniform(1.0, 100.0), 1.0, gen.log_uniform(1.0, 1e3));
    const double om = gen.log_uniform(0.1, 3.0);
    const auto w = transparency_width(med, om, med.length());
    EXPECT_NEAR(w.delay * w.width, storage_bounds(med.alpha(), 0.0).delay_ratio, 1e-9 * w.delay * w.width);
  }
}

TEST(Reflection, ZeroOnResonanceAndQuarterAtTwoVelocityWidths) {
  const double wab = kDefaultCarrier;
  for (double v : {0.1, 0.01, 1e-3}) {
    const auto r0 = reflection(wab, v);
    EXPECT_EQ(r0.exact, 0.0);
    EXPECT_EQ(r0.near_resonance, 0.0);
    EXPECT_EQ(refractive_index(wab, v).n, cd(1.0, 0.0));
    const auto r2 = reflection(wab + 2.0 * v * wab, v);
    EXPECT_NEAR(r2.near_resonance, 0.25, 1e-12);
    const double n = std::sqrt(5.0);
    EXPECT_NEAR(r2.exact, std::pow((1.0 - n) / (1.0 + n), 2), 1e-12);
  }
}

TEST(Reflection, NearResonanceFormIsTheLeadingOrder) {
  // Relative agreement improves linearly as the detuning shrinks.
  const double v = 0.01, wab = kDefaultCarrier;
  for (double x : {0.1, 0.01, 1e-3}) {
    const auto r = reflection(wab + x * v * wab, v);
    EXPECT_NEAR(r.near_resonance / r.exact, 1.0, 1.5 * x) << x;
  }
}

TEST(Reflection, EvanescentBelowTheCutoff) {
  const double v = 0.01, wab = kDefaultCarrier;
  const auto r = reflection(wab - v * wab, v);
  EXPECT_TRUE(r.evanescent);
  EXPECT_NEAR(r.exact, 1.0, 1e-12);
  EXPECT_THROW(reflection(wab, 0.0), ValidationError);
}

TEST(Reflection, SmallForPulsesInsideTheWindow) {
  const double v = 0.01, wab = kDefaultCarrier;
  double worst = 0.0;
  for (int i = -100; i <= 100; ++i)
    worst = std::max(worst, reflection(wab + 1e-3 * v * wab * i / 100.0, v).exact);
  EXPECT_LT(worst, 1e-6);
}

TEST(PulseSpectrum, GaussianWidths) {
  const double tau = 20.0;
  std::vector<double> t;
  std::vector<cd> E;
  for (int i = 0; i < 2001; ++i) {
    t.push_back(-200.0 + 0.2 * i);
    E.push_back(std::exp(-t.back() * t.back() / (tau * tau)) * std::polar(1.0, 0.05 * t.back()));
  }
  const auto s = pulse_spectrum(t, E);
  EXPECT_FALSE(s.truncated);
  EXPECT_NEAR(s.rms_width * tau, 1.0, 1e-6);
  EXPECT_NEAR(s.fwhm * tau, 2.0 * std::sqrt(2.0 * std::log(2.0)), 2e-3);
  EXPECT_NEAR(std::abs(s.centroid), 0.05, 1e-6);
}

TEST(PulseSpectrum, FlagsTruncatedRecords) {
  std::vector<double> t;
  std::vector<cd> E;
  for (int i = 0; i < 200; ++i) {
    t.push_back(i);
    E.push_back(std::exp(-std::pow((i - 30.0) / 20.0, 2)));
  }
  EXPECT_TRUE(pulse_spectrum(t, E).truncated);
  EXPECT_THROW(pulse_spectrum({0.0, 1.0, 3.0, 4.0}, {1.0, 1.0, 1.0, 1.0}), ValidationError);
}

TEST(PulseSpectrum, ShapeDeviationIgnoresShiftAndScale) {
  std::vector<double> t;
  std::vector<cd> a, b;
  for (int i = 0; i < 1024; ++i) {
    t.push_back(0.5 * i);
    const double e = std::exp(-std::pow((t.back() - 256.0) / 30.0, 2));
    a.push_back(e);
    b.push_back(3.0 * e * std::polar(1.0, 0.1 * t.back()));
  }
  EXPECT_LT(spectral_shape_deviation(pulse_spectrum(t, a), pulse_spectrum(t, b)), 0.02);
}

TEST(Narrowing, RatiosFollowTheMixingAngle) {
  Gen gen(47);
  for (int i = 0; i < 100; ++i) {
    const double t0 = gen.uniform(0.05, 1.5), t1 = gen.uniform(0.05, 1.5);
    const double c0 = std::cos(t0), c1 = std::cos(t1);
    EXPECT_NEAR(narrowing_ratio(t0, t1), c1 * c1 / (c0 * c0), 1e-12 * narrowing_ratio(t0, t1));
    EXPECT_NEAR(window_ratio(t0, t1), std::pow(std::tan(t0) / std::tan(t1), 2), 1e-12 * window_ratio(t0, t1));
  }
  // For large group index both ratios track each other: the pulse stays
  // inside the window while it is slowed.
  const double a = std::atan(30.0), b = std::atan(60.0);
  EXPECT_NEAR(narrowing_ratio(a, b) / window_ratio(a, b), 1.0, 2e-3);
}
