#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <trapgate/errors.hpp>
#include <trapgate/phase_model.hpp>

#include "common.hpp"

using namespace trapgate;
using namespace trapgate::testing;

namespace {

GateDesign be_design(double us) {
  const IonPair ions = beryllium_pair();
  return design_equal_mass(ions, natural_time(ions, us));
}

GateDesign bemg_design(double us, InversionVariant v = InversionVariant::stretch_ansatz) {
  const IonPair ions = beryllium_magnesium();
  DifferentMassOptions o;
  o.variant = v;
  return design_different_mass(ions, natural_time(ions, us), o);
}

}  // namespace

TEST(ForcedOscillator, FreeOrbit) {
  const std::complex<double> z0(0.3, -0.7);
  const Trajectory tr = solve_forced_oscillator([](double) { return 0.0; }, 1.7, z0, 5.0);
  for (double t : {0.0, 1.1, 2.5, 5.0})
    EXPECT_LT(std::abs(tr.z(t) - std::polar(1.0, -1.7 * t) * z0), 1e-14);
}

TEST(ForcedOscillator, MatchesClosedFormTrajectory) {
  const GateDesign d = be_design(0.5);
  const Trajectory exact = design_trajectory(d, up_down, Mode::plus);
  const Trajectory numeric =
      solve_forced_oscillator([&](double t) { return exact.force(t); }, exact.omega(), 0.0,
                              d.duration());
  for (int k = 0; k <= 40; ++k) {
    const double t = d.duration() * k / 40;
    EXPECT_LT(std::abs(numeric.z(t) - exact.z(t)), 1e-10);
  }
}

TEST(ForcedOscillator, HomogeneousPartClosesAtEnd) {
  const GateDesign d = be_design(0.5);
  const Trajectory exact = design_trajectory(d, up_down, Mode::plus);
  const std::complex<double> z0(0.4, 0.2);
  const Trajectory g =
      solve_forced_oscillator([&](double t) { return exact.force(t); }, exact.omega(), z0,
                              d.duration());
  const double tf = d.duration();
  EXPECT_LT(std::abs(g.z(tf) - std::polar(1.0, -exact.omega() * tf) * z0), 1e-10);
}

TEST(PhaseIdentities, AllFormsAgree) {
  for (const GateDesign& d :
       {be_design(0.3), be_design(1.0), bemg_design(0.5), bemg_design(1.2),
        bemg_design(0.6, InversionVariant::com_ansatz),
        bemg_design(0.6, InversionVariant::parallel_first)}) {
    double total = 0.0;
    for (SpinConfig c : all_spin_configs) {
      std::vector<Trajectory> modes{design_trajectory(d, c, Mode::plus),
                                    design_trajectory(d, c, Mode::minus)};
      const double series = d.configuration_phase(c);
      const double single = gate_phase_single_integral(modes);
      double lr = 0.0, area = 0.0;
      std::vector<ModeDrive> drives;
      for (const Trajectory& tr : modes) {
        lr -= lr_integral(tr, d.duration());
        area += 2.0 * converged_rotating_area(tr);
        drives.push_back({[tr](double t) { return tr.force(t); }, tr.omega()});
      }
      const DoubleIntegralPhase dbl = gate_phase_double_integral(drives, d.duration());
      EXPECT_NEAR(single, series, 1e-9);
      EXPECT_NEAR(lr, series, 1e-9);
      EXPECT_NEAR(dbl.triangle, series, 1e-9);
      EXPECT_NEAR(dbl.square, series, 1e-9);
      EXPECT_NEAR(area, series, 1e-6);
      total += differential_weight(c) * series;
    }
    EXPECT_NEAR(total, d.gamma(), 1e-9);
    EXPECT_NEAR(differential_phase_quadrature(d), d.gamma(), 1e-9);
  }
}

TEST(PhaseIdentities, LewisRiesenfeldPhase) {
  const GateDesign d = be_design(0.5);
  const Trajectory tr = design_trajectory(d, up_down, Mode::plus);
  const double G = lr_integral(tr, d.duration());
  for (int n : {0, 1, 4})
    EXPECT_NEAR(lewis_riesenfeld_phase(n, tr), -(n + 0.5) * tr.omega() * d.duration() - G, 1e-12);
  EXPECT_THROW(lewis_riesenfeld_phase(-1, tr), Error);
}

TEST(PhaseIdentities, SingleIntegralRejectsOpenTrajectory) {
  // a constant kick leaves the oscillator displaced
  const Trajectory tr = solve_forced_oscillator([](double) { return 1.0; }, 1.0, 0.0, 2.0);
  std::vector<Trajectory> modes{tr};
  try {
    gate_phase_single_integral(modes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::boundary_violation);
  }
}

TEST(PhaseDecomposition, PartsAddUp) {
  const GateDesign d = be_design(0.5);
  const Trajectory tr = design_trajectory(d, up_down, Mode::plus);
  auto f = [&](double t) { return tr.force(t); };
  const PhaseBreakdown zero = phase_decomposition(f, tr.omega(), 0.0, d.duration());
  // from rest, the phase is twice the enclosed area and -G of the path
  EXPECT_NEAR(zero.total, 2.0 * zero.area, 1e-7);
  std::vector<Trajectory> one{tr};
  EXPECT_NEAR(zero.total, gate_phase_single_integral(one), 1e-9);
  const PhaseBreakdown shifted = phase_decomposition(f, tr.omega(), {0.3, -0.2}, d.duration());
  EXPECT_NEAR(shifted.total, zero.total, 1e-9);
  EXPECT_NEAR(shifted.dynamical + shifted.geometric, shifted.total, 1e-12);
}

TEST(OffsetSensitivity, FirstOrderZero) {
  for (const GateDesign& d : {be_design(0.5), bemg_design(0.5)})
    for (SpinConfig c : all_spin_configs)
      for (Mode m : {Mode::plus, Mode::minus}) {
        const CosineSeries a = d.trajectory(c, m);
        EXPECT_NEAR(offset_sensitivity([&](double t) { return a(t); }, 0.01, d.duration()), 0.0,
                    1e-12);
      }
  // a non-closing response has a first-order term
  EXPECT_NEAR(offset_sensitivity([](double t) { return t; }, 2.0, 1.0), 0.5, 1e-12);
}

TEST(Phase, Wrapping) {
  EXPECT_NEAR(wrap_phase(-pi), pi, 1e-15);
  EXPECT_NEAR(wrap_phase(5 * pi), pi, 1e-14);
  EXPECT_EQ(wrap_phase(0.0), 0.0);
  EXPECT_LT(wrap_phase(2 * pi - 1e-17), 2 * pi);
  EXPECT_NEAR(nearest_branch(pi + 0.01, -pi), -pi + 0.01, 1e-14);
  EXPECT_NEAR(nearest_branch(0.3, 0.0), 0.3, 1e-15);
}
