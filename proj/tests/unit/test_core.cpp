#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eitlab/errors.hpp"
#include "eitlab/fft.hpp"
#include "eitlab/fields.hpp"
#include "eitlab/grid.hpp"
#include "eitlab/medium.hpp"
#include "eitlab/quadrature.hpp"
#include "eitlab/schedule.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace eitlab;
using eitlab::oracle::Gen;

namespace {

constexpr double pi = std::numbers::pi;

// Closed forms of the two preset schedules, written out independently.
double fig3_cot(double t) {
  return 100.0 * (1.0 - 0.5 * std::tanh(0.1 * (t - 15.0)) + 0.5 * std::tanh(0.1 * (t - 125.0)));
}

double fig6_cot(double t) {
  const double inner =
      5.0 * (1.0 - 0.5 * std::tanh(0.005 * (t - 2000.0)) + 0.5 * std::tanh(0.005 * (t - 3200.0)));
  return 0.363 * (1.0 - (2.0 / pi) * (pi / 2.0 - std::atan(inner)));
}

}  // namespace

TEST(Medium, MixingAngleLimits) {
  const MediumParams m(2.5, 1.0, 10.0);
  const double G = std::sqrt(2.5);
  EXPECT_NEAR(mixing_angle(G, m), pi / 4, 1e-15);
  EXPECT_EQ(mixing_angle(std::numeric_limits<double>::infinity(), m), 0.0);
  EXPECT_NEAR(mixing_angle(1e300, m), 0.0, 1e-290);
  EXPECT_NEAR(mixing_angle(0.0, m), pi / 2, 1e-15);
  EXPECT_THROW(mixing_angle(-1.0, m), ValidationError);
}

TEST(Medium, GroupIndexAndVelocity) {
  const MediumParams m(2.5, 1.0, 10.0);
  EXPECT_NEAR(group_index(0.5, m), 10.0, 1e-12);
  EXPECT_NEAR(group_velocity(0.5, m), 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(group_index(std::sqrt(2.5), m), 1.0, 1e-14);
  EXPECT_NEAR(group_velocity(std::sqrt(2.5), m), 0.5, 1e-15);
  EXPECT_TRUE(is_infinite_group_index(group_index(0.0, m)));
  EXPECT_EQ(group_velocity(0.0, m), 0.0);
}

TEST(Medium, TanSquaredEqualsGroupIndexOverSixDecades) {
  Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const MediumParams m(gen.log_uniform(1e-3, 1e3), gen.log_uniform(0.1, 10.0), 1.0);
    const double omega = gen.log_uniform(1e-3, 1e3);
    const double th = mixing_angle(omega, m);
    const double ng = group_index(omega, m);
    EXPECT_NEAR(std::tan(th) * std::tan(th) / ng, 1.0, 1e-12);
    const double vg = group_velocity(omega, m);
    EXPECT_NEAR(vg, std::cos(th) * std::cos(th), 1e-12 * std::max(vg, 1e-300) + 1e-15);
  }
}

TEST(Medium, OpacityIsDerived) {
  const auto m = MediumParams::with_opacity(2.5, 625.0);
  EXPECT_NEAR(m.length(), 250.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.alpha(), m.g2N() * m.length() / (m.gamma() * 1.0));
  EXPECT_NEAR(MediumParams(10.0, 1.0, 2.0).alpha(), 20.0, 1e-14);
  EXPECT_EQ(m.gamma_ba(), m.gamma());
}

TEST(Medium, RejectsUnphysicalParameters) {
  EXPECT_THROW(MediumParams(0.0, 1.0, 1.0), ValidationError);
  EXPECT_THROW(MediumParams(1.0, -1.0, 1.0), ValidationError);
  EXPECT_THROW(MediumParams(1.0, 1.0, 0.0), ValidationError);
  EXPECT_THROW((void)MediumParams(1.0, 1.0, 1.0).with_gamma0(-1e-3), ValidationError);
  EXPECT_THROW((void)MediumParams(1.0, 1.0, 1.0).with_delta_k(std::nan("")), ValidationError);
  EXPECT_THROW(MediumParams::with_opacity(1.0, -5.0), ValidationError);
}

TEST(Schedule, StopReleasePlateauStopsThePulse) {
  const MediumParams m(100.0, 1.0, 100.0);
  const auto s = presets::stop_and_release_fig3();
  const auto at70 = eval_schedule(s, m, 70.0);
  EXPECT_NEAR(at70.cot_theta, fig3_cot(70.0), 1e-12 * fig3_cot(70.0));
  EXPECT_LT(at70.group_velocity, 2e-3);
  const auto late = eval_schedule(s, m, 1e4);
  EXPECT_NEAR(late.cot_theta, 100.0, 1e-9);
  EXPECT_NEAR(late.group_velocity, 1e4 / (1.0 + 1e4), 1e-12);
  EXPECT_NEAR(late.omega, 10.0 * 100.0, 1e-7);
}

TEST(Schedule, SlowdownInitialGroupVelocity) {
  const MediumParams m = MediumParams::with_opacity(2.5, 625.0);
  const auto s = presets::stop_and_release_fig6();
  const auto at0 = eval_schedule(s, m, 0.0);
  EXPECT_NEAR(at0.cot_theta, 0.3174, 5e-4);
  EXPECT_NEAR(at0.group_velocity, 0.0915, 5e-4);
  for (double t : {0.0, 1000.0, 2600.0, 3500.0, 4000.0})
    EXPECT_NEAR(s.cot_theta(t), fig6_cot(t), 1e-13);
}

TEST(Schedule, AnglesStayOnTheQuarterCircle) {
  const MediumParams m(3.0, 1.0, 10.0);
  const ControlSchedule families[] = {
      presets::stop_and_release_fig3(), presets::stop_and_release_fig6(),
      ControlSchedule::constant_cot(0.7), ControlSchedule::storage_ramp(50.0),
      ControlSchedule::retrieval_ramp(50.0)};
  Gen gen(12);
  for (const auto& s : families) {
    for (int i = 0; i < 200; ++i) {
      const double t = gen.uniform(-100.0, 5000.0);
      const auto e = eval_schedule(s, m, t);
      EXPECT_GE(e.theta, 0.0);
      EXPECT_LE(e.theta, pi / 2);
      EXPECT_NEAR(std::cos(e.theta) * std::cos(e.theta) + std::sin(e.theta) * std::sin(e.theta),
                  1.0, 1e-15);
      EXPECT_GE(e.group_velocity, 0.0);
      EXPECT_LE(e.group_velocity, 1.0);
      EXPECT_NEAR(e.omega, std::sqrt(3.0) * e.cot_theta, 1e-12 * (1.0 + e.omega));
    }
  }
}

TEST(Schedule, JetMatchesFiniteDifferences) {
  const ControlSchedule families[] = {presets::stop_and_release_fig3(),
                                      presets::stop_and_release_fig6(),
                                      ControlSchedule::storage_ramp(40.0)};
  Gen gen(13);
  for (const auto& s : families) {
    for (int i = 0; i < 40; ++i) {
      const double t = gen.uniform(0.0, 3500.0);
      const Jet j = s.theta_jet(t);
      const double h = 1e-2;
      auto th = [&](double x) { return s.theta(x); };
      const double d1 = (-th(t + 2 * h) + 8 * th(t + h) - 8 * th(t - h) + th(t - 2 * h)) / (12 * h);
      const double d2 =
          (-th(t + 2 * h) + 16 * th(t + h) - 30 * th(t) + 16 * th(t - h) - th(t - 2 * h)) /
          (12 * h * h);
      EXPECT_NEAR(j.v, th(t), 1e-15);
      EXPECT_NEAR(j.d1, d1, 1e-8 + 1e-6 * std::abs(d1));
      EXPECT_NEAR(j.d2, d2, 1e-6 + 1e-4 * std::abs(d2));
    }
  }
}

TEST(Schedule, TabulatedReproducesParametricFamilies) {
  // Ten samples per ramp width, the e-folding time 1/(2c) of the tanh edges.
  const ControlSchedule sources[] = {presets::stop_and_release_fig3(),
                                     presets::stop_and_release_fig6()};
  const double spans[] = {200.0, 4000.0};
  const double widths[] = {5.0, 100.0};
  for (int f = 0; f < 2; ++f) {
    const double t1 = spans[f];
    const auto n = static_cast<std::size_t>(t1 / (widths[f] / 10.0)) + 1;
    const auto tab = ControlSchedule::sampled(sources[f], 0.0, t1, n);
    EXPECT_TRUE(tab.is_tabulated());
    double worst = 0.0, peak = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double t = t1 * i / 20000.0;
      worst = std::max(worst, std::abs(tab.cot_theta(t) - sources[f].cot_theta(t)));
      peak = std::max(peak, std::abs(sources[f].cot_theta(t)));
    }
    EXPECT_LT(worst / peak, 1e-6) << sources[f].describe();
  }
}

TEST(Schedule, TabulatedErrorFallsAsFourthPower) {
  const auto src = presets::stop_and_release_fig6();
  auto error = [&](std::size_t n) {
    const auto tab = ControlSchedule::sampled(src, 0.0, 4000.0, n);
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double t = 4000.0 * i / 20000.0;
      worst = std::max(worst, std::abs(tab.cot_theta(t) - src.cot_theta(t)));
    }
    return worst;
  };
  const double order = std::log2(error(201) / error(401));
  EXPECT_GT(order, 3.5);
  EXPECT_LT(order, 4.5);
}

TEST(Schedule, TabulatedIsValidated) {
  EXPECT_THROW(ControlSchedule::tabulated({0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), ValidationError);
  EXPECT_THROW(ControlSchedule::tabulated({0.0, 1.0}, {1.0, -2.0}), ValidationError);
  EXPECT_THROW(ControlSchedule::tabulated({0.0}, {1.0}), ValidationError);
  EXPECT_THROW(ControlSchedule::tabulated({0.0, 1.0}, {1.0}), ValidationError);
  const auto tab = ControlSchedule::tabulated({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0});
  EXPECT_THROW(tab.cot_theta(2.5), ValidationError);
  EXPECT_THROW(tab.cot_theta(-0.1), ValidationError);
  EXPECT_NEAR(tab.cot_theta(1.0), 2.0, 1e-15);
}

TEST(Schedule, TabulatedPreservesMonotonicity) {
  std::vector<double> t, c;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(i);
    c.push_back(i < 10 ? 5.0 : 0.01);
  }
  const auto tab = ControlSchedule::tabulated(t, c);
  double prev = tab.cot_theta(0.0);
  for (int i = 1; i <= 2000; ++i) {
    const double v = tab.cot_theta(20.0 * i / 2000.0);
    EXPECT_LE(v, prev + 1e-14);
    EXPECT_GE(v, 0.0);
    prev = v;
  }
}

TEST(Schedule, RampFamiliesAreValidated) {
  EXPECT_THROW(ControlSchedule::tanh_ramp({1.0, 0.7, 1.0, 0.0}), ValidationError);
  EXPECT_THROW(ControlSchedule::tanh_ramp({-1.0, 0.5, 1.0, 0.0}), ValidationError);
  EXPECT_THROW(ControlSchedule::constant_cot(-0.1), ValidationError);
  EXPECT_THROW(ControlSchedule::storage_ramp(0.0), ValidationError);
}

TEST(Schedule, StorageAndRetrievalAreMirrorImages) {
  const auto s = ControlSchedule::storage_ramp(30.0);
  const auto r = ControlSchedule::retrieval_ramp(30.0);
  EXPECT_LT(s.theta(0.0), 0.02);
  EXPECT_GT(s.theta(30.0), pi / 2 - 0.02);
  for (double t : {0.0, 7.0, 15.0, 22.0, 30.0}) EXPECT_NEAR(s.theta(t), r.theta(30.0 - t), 1e-12);
}

TEST(Grid, LayoutAndWavenumbers) {
  const Grid g(-8.0, 8.0, 16, 0.1, 1.0);
  EXPECT_DOUBLE_EQ(g.dz(), 1.0);
  EXPECT_DOUBLE_EQ(g.z(3), -5.0);
  const auto k = g.wavenumbers();
  EXPECT_DOUBLE_EQ(k[0], 0.0);
  EXPECT_NEAR(k[1], 2 * pi / 16.0, 1e-15);
  EXPECT_NEAR(k[15], -2 * pi / 16.0, 1e-15);
  EXPECT_NEAR(k[8], -pi, 1e-15);
  EXPECT_NEAR(g.k_max(), pi, 1e-15);
  EXPECT_EQ(g.steps(), 10u);
  EXPECT_EQ(g.nearest_index(-4.6), 3u);
}

TEST(Grid, RejectsBadLayouts) {
  EXPECT_THROW(Grid(0.0, 1.0, 12, 1e-3, 1.0), ValidationError);
  EXPECT_THROW(Grid(0.0, 1.0, 2, 1e-3, 1.0), ValidationError);
  EXPECT_THROW(Grid(1.0, 0.0, 16, 1e-3, 1.0), ValidationError);
  // dz = 1/16, CFL bound 0.5 dz / c.
  EXPECT_THROW(Grid(0.0, 1.0, 16, 0.04, 1.0), ValidationError);
  EXPECT_NO_THROW(Grid(0.0, 1.0, 16, 0.03125, 1.0));
}

TEST(Grid, StepsLandOnFinalTime) {
  Gen gen(14);
  for (int i = 0; i < 100; ++i) {
    const double tf = gen.uniform(0.1, 100.0);
    const Grid g = Grid::with_cfl(0.0, 64.0, 256, tf);
    EXPECT_NEAR(g.step() * static_cast<double>(g.steps()), tf, 1e-12 * tf);
    EXPECT_LE(g.step(), g.dt() * (1 + 1e-12));
  }
}

TEST(Fields, ValidateShapes) {
  auto fs = FieldState::zeros(16);
  EXPECT_NO_THROW(fs.validate(16));
  fs.sbc.resize(8);
  EXPECT_THROW(fs.validate(16), ValidationError);
  auto ps = PolaritonField::zeros(16);
  ps.psi[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ps.validate(16), ValidationError);
}

TEST(Fft, MatchesNaiveTransform) {
  Gen gen(15);
  const std::size_t n = 64;
  std::vector<std::complex<double>> x(n);
  for (auto& v : x) v = {gen.uniform(-1, 1), gen.uniform(-1, 1)};
  const auto ref = oracle::naive_dft(x, -1);
  Fft fft(n);
  ComplexVector in(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) in[static_cast<Eigen::Index>(i)] = x[i];
  const ComplexVector out = fft.forward(in);
  for (std::size_t i = 0; i < n; ++i)
    EXPECT_LT(std::abs(out[static_cast<Eigen::Index>(i)] - ref[i]), 1e-12);
  const ComplexVector back = fft.inverse(out);
  EXPECT_LT((back - in).norm(), 1e-13);
}

TEST(Quadrature, KnownIntegrals) {
  EXPECT_NEAR(integrate([](double t) { return std::exp(-t * t); }, -10.0, 10.0), std::sqrt(pi),
              1e-12);
  EXPECT_NEAR(integrate([](double t) { return std::pow(std::tanh(0.1 * (t - 5)), 2); }, 0.0, 200.0),
              oracle::simpson([](double t) { return std::pow(std::tanh(0.1 * (t - 5)), 2); }, 0.0,
                               200.0, 200000),
              1e-8);
}
