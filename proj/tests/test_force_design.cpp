#include <array>
#include <cmath>
#include <random>

#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include <trapgate/errors.hpp>
#include <trapgate/force_design.hpp>
#include <trapgate/quadrature.hpp>

#include "common.hpp"

using namespace trapgate;
using namespace trapgate::testing;

namespace {

// Integrates y'' + W^2 y = f(t) from rest with an adaptive Runge-Kutta-Fehlberg 7(8)
// stepper, driving f with the lab forces mapped to the mode.
std::array<double, 2> newton_end_state(const GateDesign& d, SpinConfig c, Mode m) {
  namespace ode = boost::numeric::odeint;
  const double w = m == Mode::plus ? d.basis().omega_plus : d.basis().omega_minus;
  std::array<double, 2> y{0.0, 0.0};
  auto rhs = [&](const std::array<double, 2>& s, std::array<double, 2>& ds, double t) {
    const ModeForces f = d.mode_forces(c, t);
    ds[0] = s[1];
    ds[1] = (m == Mode::plus ? f.plus : f.minus) - w * w * s[0];
  };
  ode::integrate_adaptive(
      ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<std::array<double, 2>>()),
      rhs, y, 0.0, d.duration(), d.duration() / 1000);
  return {y[0], y[1] / w};
}

double peak(const CosineSeries& s, double tf) {
  double p = 0.0;
  for (int k = 0; k <= 2000; ++k) p = std::max(p, std::abs(s(tf * k / 2000)));
  return p;
}

}  // namespace

TEST(EqualMass, PhaseEqualsTarget) {
  const IonPair ions = beryllium_pair();
  for (double us : {0.05, 0.1, 0.3, 0.5, 1.0, 2.0}) {
    const GateDesign d = design_equal_mass(ions, natural_time(ions, us));
    EXPECT_NEAR(d.differential_phase(), -pi, 1e-9) << us;
  }
}

TEST(EqualMass, RejectsPositivePhase) {
  const IonPair ions = beryllium_pair();
  try {
    design_equal_mass(ions, natural_time(ions, 0.5), pi / 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_real_coefficient);
  }
}

TEST(EqualMass, BerylliumMaxForce) {
  // 223.89 zN for two Be ions at 2 MHz and tf = 0.5 us
  const IonPair ions = beryllium_pair();
  const GateDesign d = design_equal_mass(ions, natural_time(ions, 0.5));
  EXPECT_NEAR(d.force().newton(max_force(d.force())) * 1e21, 223.89, 0.01);
}

TEST(EqualMass, ForceIsOddAboutTheMidpoint) {
  const IonPair ions = beryllium_pair();
  for (double us : {0.5, 0.8, 1.0}) {
    const GateDesign d = design_equal_mass(ions, natural_time(ions, us));
    const double tf = d.duration();
    for (int k = 0; k <= 50; ++k) {
      const double t = tf * k / 100;
      EXPECT_NEAR(d.force().base_a(t), -d.force().base_a(tf - t), 1e-12);
    }
    EXPECT_EQ(d.force().base_a(-0.1), 0.0);
    EXPECT_EQ(d.force().base_a(tf * 1.1), 0.0);
  }
}

TEST(EqualMass, ExplicitAlphasMatchSeries) {
  const IonPair ions = beryllium_pair();
  const GateDesign d = design_equal_mass(ions, natural_time(ions, 0.7));
  for (int k = 0; k <= 20; ++k) {
    const double t = d.duration() * k / 20;
    const auto a = equal_mass_alphas(d, t);
    EXPECT_NEAR(a[0], d.trajectory(up_down, Mode::plus)(t), 1e-12);
    EXPECT_NEAR(a[1], d.trajectory(up_up, Mode::minus)(t), 1e-12);
  }
}

TEST(EqualMass, ClosedFormMatchesSeries) {
  const IonPair ions = beryllium_pair();
  const GateDesign d = design_equal_mass(ions, natural_time(ions, 0.4));
  const CosineSeries s = d.base_force_series();
  double scale = 0.0, diff = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = d.duration() * k / 400;
    scale = std::max(scale, std::abs(s(t)));
    diff = std::max(diff, std::abs(s(t) - d.force().base_a(t)));
  }
  EXPECT_LT(diff, 1e-12 * scale);
}

TEST(EqualMass, SymmetricForces) {
  const IonPair ions = beryllium_pair();
  const GateDesign d = design_equal_mass(ions, natural_time(ions, 0.5));
  const double t = 0.3 * d.duration();
  const auto ud = d.force().forces(up_down, t);
  EXPECT_NEAR(ud[0], -ud[1], 1e-15);
  EXPECT_NEAR(d.force().force(1, Spin::up, t), -d.force().force(1, Spin::down, t), 1e-15);
}

TEST(DifferentMass, CriticalTimes) {
  const IonPair ions = beryllium_magnesium();
  const auto c = critical_times(TwoIonSystem(ions).basis);
  ASSERT_TRUE(c);
  const double us = ions.units().time * 1e6;
  EXPECT_NEAR(c->t1 * us, 0.8, 0.01);
  EXPECT_NEAR(c->t2 * us, 1.03, 0.01);
  EXPECT_FALSE(critical_times(TwoIonSystem(beryllium_pair()).basis));
}

TEST(DifferentMass, GuardBandRejectsNearCriticalTimes) {
  const IonPair ions = beryllium_magnesium();
  const auto c = *critical_times(TwoIonSystem(ions).basis);
  for (InversionVariant v : {InversionVariant::stretch_ansatz, InversionVariant::com_ansatz,
                             InversionVariant::parallel_first}) {
    DifferentMassOptions o;
    o.variant = v;
    for (double t : {c.t1, c.t2})
      for (double f : {0.995, 1.0, 1.005}) {
        try {
          design_different_mass(ions, t * f, o);
          ADD_FAILURE() << to_string(v) << " accepted tf = " << t * f;
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), Errc::critical_time_proximity);
        }
      }
    for (double t : {0.5 * c.t1, 0.97 * c.t1, 1.03 * c.t1, 0.97 * c.t2, 1.03 * c.t2, 1.5 * c.t2}) {
      const GateDesign d = design_different_mass(ions, t, o);
      EXPECT_TRUE(std::isfinite(max_force(d.force())));
      EXPECT_NEAR(std::abs(d.differential_phase()), pi, 1e-9);
    }
  }
}

TEST(DifferentMass, SignFollowsDuration) {
  const IonPair ions = beryllium_magnesium();
  const double tf = natural_time(ions, 0.5);
  EXPECT_NEAR(design_different_mass(ions, tf).gamma(), -pi, 1e-15);
  DifferentMassOptions o;
  o.gamma = pi;
  EXPECT_THROW(design_different_mass(ions, tf, o), Error);
}

TEST(DifferentMass, EqualMassLimit) {
  const IonPair be = beryllium_pair();
  const double tf = natural_time(be, 0.5);
  const GateDesign eq = design_equal_mass(be, tf);
  const GateDesign near = design_different_mass(IonPair(be.m1(), 1.0 + 1e-9, be.omega1()), tf);
  const double scale = max_force(eq.force());
  for (int k = 0; k < 1000; ++k) {
    const double t = tf * (k + 0.5) / 1000;
    EXPECT_NEAR(near.force().base_a(t), eq.force().base_a(t), 1e-4 * scale);
    EXPECT_NEAR(near.force().force(2, Spin::up, t), eq.force().force(2, Spin::up, t), 1e-4 * scale);
  }
}

TEST(ForceRatio, PhaseIsIndependentOfRatio) {
  const IonPair be = beryllium_pair();
  const GateDesign d = design_equal_mass(be, natural_time(be, 0.6));
  for (double c : {-2.0, -1.0, -0.5, 3.0}) {
    const GateDesign r = apply_force_ratio(d, c);
    EXPECT_NEAR(r.differential_phase(), d.gamma(), 1e-9) << c;
    EXPECT_NEAR(r.force().multiplier(1, Spin::up), c * r.force().multiplier(1, Spin::down), 1e-12);
  }
  EXPECT_THROW(apply_force_ratio(d, 1.0), Error);

  const IonPair bm = beryllium_magnesium();
  const GateDesign dm = design_different_mass(bm, natural_time(bm, 0.6));
  for (auto [c1, c2] : {std::pair{-2.0, 0.5}, {-0.5, -3.0}, {3.0, -2.0}, {-1.0, -1.0}})
    EXPECT_NEAR(apply_force_ratio(dm, c1, c2).differential_phase(), dm.gamma(), 1e-9);
  try {
    apply_force_ratio(dm, 2.0, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_real_scaling);
  }
}

TEST(Newton, RandomDesignsEndAtRest) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> tf_us(0.1, 2.0), mass(9.0, 138.0), ratio(-3.0, -0.2);
  for (int trial = 0; trial < 8; ++trial) {
    const double m2 = trial % 2 ? 9.0 : mass(rng);
    const IonPair ions = IonPair::from_amu(9, m2, two_mhz);
    const double tf = natural_time(ions, tf_us(rng));
    GateDesign d = [&] {
      if (m2 == 9.0) return apply_force_ratio(design_equal_mass(ions, tf), ratio(rng));
      DifferentMassOptions o;
      o.guard_band = 0.03;
      for (double f = 1.0;; f *= 1.07) {
        try {
          return design_different_mass(ions, tf * f, o);
        } catch (const Error&) {
        }
      }
    }();
    double largest = 0.0;
    for (SpinConfig c : all_spin_configs)
      for (Mode m : {Mode::plus, Mode::minus})
        largest = std::max(largest, peak(d.trajectory(c, m), d.duration()));
    for (SpinConfig c : all_spin_configs)
      for (Mode m : {Mode::plus, Mode::minus}) {
        const double p = peak(d.trajectory(c, m), d.duration());
        if (p < 1e-12 * largest) continue;  // undriven up to rounding
        const auto end = newton_end_state(d, c, m);
        EXPECT_LT(std::abs(end[0]), 1e-6 * p);
        EXPECT_LT(std::abs(end[1]), 1e-6 * p);
      }
  }
}

TEST(ForceIntegral, MatchesBruteForce) {
  const IonPair bm = beryllium_magnesium();
  const GateDesign d = design_different_mass(bm, natural_time(bm, 0.5));
  const ForceIntegral fi = force_integral_proxy(d.force());
  // dense midpoint rule oracle
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  const double h = d.duration() / n;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * h;
    s1 += std::abs(d.force().force(1, Spin::up, t)) * h;
    s2 += std::abs(d.force().force(2, Spin::up, t)) * h;
  }
  EXPECT_NEAR(fi.ion1, s1, 1e-8 * s1);
  EXPECT_NEAR(fi.ion2, s2, 1e-8 * s2);
}

TEST(MaxForce, MatchesDenseSampling) {
  const IonPair be = beryllium_pair();
  const GateDesign d = design_equal_mass(be, natural_time(be, 0.3));
  double m = 0.0;
  for (int k = 0; k <= 200000; ++k) m = std::max(m, std::abs(d.force().base_a(d.duration() * k / 200000)));
  EXPECT_GE(max_force(d.force()), m * (1 - 1e-12));
  EXPECT_NEAR(max_force(d.force()), m, 1e-8 * m);
}
