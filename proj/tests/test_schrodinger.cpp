#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <trapgate/errors.hpp>
#include <trapgate/phase_model.hpp>
#include <trapgate/schrodinger.hpp>

#include "common.hpp"

using namespace trapgate;
using namespace trapgate::testing;

namespace {

Grid2D small_grid(const TwoIonSystem& s, int n, int n_plus = 0, IonWidths excursion = {0, 0}) {
  GridOptions o;
  o.n1 = o.n2 = n;
  return make_grid(s, excursion, n_plus, o);
}

double harmonic_energy(const TwoIonSystem& s) {
  return 0.5 * (s.basis.omega_plus + s.basis.omega_minus);
}

template <class F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::invalid_argument;
}

}  // namespace

TEST(Potential, VanishesAtEquilibrium) {
  for (const IonPair& ions : {beryllium_pair(), beryllium_magnesium()}) {
    const TwoIonSystem s(ions);
    const double x1 = s.geometry.x1, x2 = s.geometry.x2;
    EXPECT_NEAR(potential_at(x1, x2, s, ForceModel::homogeneous(), 0, 0), 0.0, 1e-10);
    EXPECT_EQ(potential_at(x1, x2, s, ForceModel::homogeneous(), 0, 0),
              potential_energy({x1, x2}, ions, s.geometry));
  }
}

TEST(Potential, HessianMatchesModes) {
  const IonPair ions = beryllium_magnesium();
  const TwoIonSystem s(ions);
  const double h = 1e-2, x1 = s.geometry.x1, x2 = s.geometry.x2;
  auto V = [&](double a, double b) {
    return potential_at(x1 + a, x2 + b, s, ForceModel::homogeneous(), 0, 0);
  };
  Eigen::Matrix2d H;
  H(0, 0) = (V(h, 0) - 2 * V(0, 0) + V(-h, 0)) / (h * h);
  H(1, 1) = (V(0, h) - 2 * V(0, 0) + V(0, -h)) / (h * h);
  H(0, 1) = H(1, 0) = (V(h, h) - V(h, -h) - V(-h, h) + V(-h, -h)) / (4 * h * h);
  Eigen::Matrix2d Minv = Eigen::Matrix2d::Identity();
  Minv(1, 1) = 1.0 / std::sqrt(ions.mass_ratio());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Minv * H * Minv);
  EXPECT_NEAR(es.eigenvalues()(0), s.basis.lambda_minus, 1e-6);
  EXPECT_NEAR(es.eigenvalues()(1), s.basis.lambda_plus, 1e-6);
}

TEST(Potential, CoulombCapOnCollisionLine) {
  const TwoIonSystem s(beryllium_pair());
  EXPECT_EQ(potential_at(1.0, 1.0, s, ForceModel::homogeneous(), 0, 0), coulomb_cap);
  EXPECT_EQ(potential_at(2.0, 1.0, s, ForceModel::homogeneous(), 0, 0), coulomb_cap);
  EXPECT_EQ(potential_at(0.0, 1e-12, s, ForceModel::homogeneous(), 0, 0), coulomb_cap);
}

TEST(ForceModel, SinusoidalShape) {
  const TwoIonSystem s(beryllium_pair());
  const double dk = periods_wavenumber(s.geometry, 8);
  const ForceModel m = ForceModel::sinusoidal(dk);
  const double x0 = s.geometry.x1;
  EXPECT_DOUBLE_EQ(m.slope(x0, x0), 1.0);
  EXPECT_DOUBLE_EQ(m.shape(x0, x0), x0);
  // full periods between the ions: both see the same phase of the wave
  EXPECT_NEAR(std::sin(dk * (s.geometry.x2 - x0)), 0.0, 1e-12);
  const double h = 1e-5, x = x0 + 0.3;
  EXPECT_NEAR((m.shape(x + h, x0) - m.shape(x - h, x0)) / (2 * h), m.slope(x, x0), 1e-9);
  // dk -> 0 recovers the homogeneous force
  const ForceModel tiny = ForceModel::sinusoidal(1e-6);
  EXPECT_NEAR(tiny.shape(x0 + 0.7, x0), x0 + 0.7, 1e-12);
  EXPECT_EQ(ForceModel::sinusoidal(0.0).shape(3.0, 1.0), 3.0);
  EXPECT_THROW(periods_wavenumber(s.geometry, 0), Error);
}

TEST(ForceModel, EightPeriodWavenumberForBeryllium) {
  const IonPair ions = beryllium_pair();
  const TwoIonSystem s(ions);
  const double dk = periods_wavenumber(s.geometry, 8) * ions.units().wavenumber();
  EXPECT_NEAR(dk, 8.67e6, 0.01e6);
}

TEST(ForceModel, ForcedPotentialAddsWork) {
  const TwoIonSystem s(beryllium_pair());
  const double x1 = s.geometry.x1 + 0.2, x2 = s.geometry.x2 - 0.1;
  const double base = potential_at(x1, x2, s, ForceModel::homogeneous(), 0, 0);
  EXPECT_NEAR(potential_at(x1, x2, s, ForceModel::homogeneous(), 0.5, -0.25),
              base + 0.5 * x1 - 0.25 * x2, 1e-9);
}

TEST(Grid, ValidatesSize) {
  Grid2D g;
  g.n1 = 100;
  EXPECT_THROW(g.validate(), Error);
  g.n1 = 64;
  g.x1_max = g.x1_min;
  EXPECT_THROW(g.validate(), Error);
}

TEST(Overlap, TrivialCases) {
  const TwoIonSystem s(beryllium_pair());
  const Grid2D g = small_grid(s, 64);
  const WaveFunction2D a = fock_initial_state(g, s, 0);
  const Overlap self = overlap_and_phase(a, a);
  EXPECT_NEAR(self.magnitude, 1.0, 1e-10);
  EXPECT_NEAR(std::abs(self.phase - (self.phase > pi ? 2 * pi : 0.0)), 0.0, 1e-12);

  WaveFunction2D b = a;
  for (auto& v : b.data) v *= std::polar(1.0, 0.7);
  EXPECT_NEAR(overlap_and_phase(a, b).phase, 0.7, 1e-12);
  for (auto& v : b.data) v *= std::polar(1.0, -1.4);
  EXPECT_NEAR(overlap_and_phase(a, b).phase, 2 * pi - 0.7, 1e-12);

  Grid2D other = g;
  other.x1_max += 1.0;
  const WaveFunction2D c(other);
  EXPECT_EQ(error_code([&] { overlap_and_phase(a, c); }), Errc::grid_mismatch);
}

TEST(Infidelity, WorstCase) {
  EXPECT_NEAR(worst_case_infidelity(1.0, pi), 0.0, 1e-15);
  EXPECT_NEAR(worst_case_infidelity(1.0, -pi), 0.0, 1e-15);
  EXPECT_NEAR(worst_case_infidelity(1.0, pi + 0.1), 1 - std::pow(std::cos(0.1), 2), 1e-15);
  EXPECT_NEAR(worst_case_infidelity(1.0, pi - 0.1), 9.97e-3, 1e-5);
  EXPECT_NEAR(worst_case_infidelity(std::polar(0.9, 1.0), pi), 1 - 0.81, 1e-14);
}

TEST(Fock, Orthonormal) {
  const TwoIonSystem s(beryllium_magnesium());
  const Grid2D g = small_grid(s, 128, 5);
  std::vector<WaveFunction2D> f;
  for (int n = 0; n <= 5; ++n) f.push_back(fock_initial_state(g, s, n));
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 5; ++m)
      EXPECT_NEAR(std::abs(inner_product(f[n], f[m])), n == m ? 1.0 : 0.0, 1e-8) << n << m;
}

TEST(Fock, RequiresMargin) {
  const TwoIonSystem s(beryllium_pair());
  const Grid2D g = small_grid(s, 64, 0);
  EXPECT_EQ(error_code([&] { fock_initial_state(g, s, 6); }), Errc::grid_too_narrow);
}

TEST(GroundState, MatchesHarmonicLimit) {
  const TwoIonSystem s(beryllium_pair());
  const Grid2D g = small_grid(s, 64);
  const GroundState gs = imaginary_time_ground_state(g, s);
  const double e0 = harmonic_energy(s);
  EXPECT_NEAR(gs.energy, e0, 1e-3 * e0);
  for (std::size_t k = 1; k < gs.energies.size(); ++k)
    EXPECT_LE(gs.energies[k], gs.energies[k - 1] + 1e-13);
  EXPECT_NEAR(gs.psi.norm(), 1.0, 1e-12);
  EXPECT_NEAR(energy_expectation(gs.psi, s), gs.energy, 1e-9);

  const PositionMoments m = position_moments(gs.psi);
  const double w = 0.5 * std::sqrt(1.0 + 1.0 / std::sqrt(3.0));
  EXPECT_NEAR(m.width1, w, 1e-3 * w);
  EXPECT_NEAR(m.width2, w, 1e-3 * w);
  EXPECT_NEAR(harmonic_widths(s).ion1, w, 1e-14);
  EXPECT_NEAR(m.mean1, s.geometry.x1, 0.01);
  EXPECT_NEAR(m.mean2, s.geometry.x2, 0.01);
  EXPECT_GT(std::abs(inner_product(fock_initial_state(g, s, 0), gs.psi)), 0.9999);
}

TEST(GroundState, DifferentMasses) {
  const TwoIonSystem s(beryllium_magnesium());
  const GroundState gs = imaginary_time_ground_state(small_grid(s, 64), s);
  EXPECT_NEAR(gs.energy, harmonic_energy(s), 1e-3 * harmonic_energy(s));
}

TEST(GroundState, ReportsNoConvergence) {
  const TwoIonSystem s(beryllium_pair());
  GroundStateOptions o;
  o.max_steps = 40;
  EXPECT_EQ(error_code([&] { imaginary_time_ground_state(small_grid(s, 64), s, o); }),
            Errc::no_convergence);
}

TEST(Propagation, StationaryStateOnlyRotates) {
  const TwoIonSystem s(beryllium_pair());
  const Grid2D g = small_grid(s, 64);
  const GroundState gs = imaginary_time_ground_state(g, s);
  const double tf = 3.0;
  const Propagation p = propagate_real_time(
      gs.psi, s, [](double) { return std::array<double, 2>{0.0, 0.0}; },
      ForceModel::homogeneous(), tf, 4096);
  const Overlap o = overlap_and_phase(gs.psi, p.psi);
  EXPECT_NEAR(o.magnitude, 1.0, 1e-8);
  EXPECT_NEAR(nearest_branch(o.phase, -gs.energy * tf), -gs.energy * tf, 1e-6);
  EXPECT_LT(p.max_norm_error, 1e-10);
  EXPECT_EQ(p.steps, 4096);
  EXPECT_NEAR(p.psi.time, tf, 1e-12);
}

TEST(Propagation, ObserverSeesEveryInterval) {
  const TwoIonSystem s(beryllium_pair());
  const Grid2D g = small_grid(s, 32);
  const WaveFunction2D psi = fock_initial_state(g, s, 0);
  PropagationOptions o;
  int calls = 0;
  o.observer = [&](const WaveFunction2D&) { ++calls; };
  o.observer_interval = 10;
  propagate_real_time(psi, s, [](double) { return std::array<double, 2>{0.0, 0.0}; },
                      ForceModel::homogeneous(), 1.0, 40, o);
  EXPECT_GE(calls, 4);
}

TEST(Propagation, DetectsBoundaryLeak) {
  const TwoIonSystem s(beryllium_pair());
  const Grid2D g = small_grid(s, 64);
  const WaveFunction2D psi = fock_initial_state(g, s, 0);
  // a strong constant push drives the pair into the grid edge
  EXPECT_EQ(error_code([&] {
              propagate_real_time(psi, s, [](double) { return std::array<double, 2>{-20.0, -20.0}; },
                                  ForceModel::homogeneous(), 4.0, 512);
            }),
            Errc::boundary_leak);
}

TEST(Propagation, GridTooNarrowForDesign) {
  const IonPair ions = beryllium_pair();
  const TwoIonSystem s(ions);
  const GateDesign d = design_equal_mass(ions, natural_time(ions, 0.5));
  GridOptions o;
  o.n1 = o.n2 = 64;
  o.sigma_margin = 6.5;
  const Grid2D g = make_grid(s, {0.0, 0.0}, 0, o);  // no room for the excursion
  ASSERT_GT(design_excursion(d).ion1, 0.5);
  const WaveFunction2D psi = fock_initial_state(g, s, 0);
  EXPECT_EQ(error_code([&] { build_potential(g, d, up_down, 0.0, ForceModel::homogeneous()); }),
            Errc::grid_too_narrow);
  EXPECT_EQ(error_code([&] { differential_phase_experiment(d, ForceModel::homogeneous(), psi); }),
            Errc::grid_too_narrow);
}

TEST(LambDicke, LinearInWavenumber) {
  const IonPair ions = beryllium_pair();
  const GateDesign d = design_equal_mass(ions, natural_time(ions, 0.5));
  const LambDicke a = lamb_dicke_validity(d, 0.1), b = lamb_dicke_validity(d, 0.2);
  EXPECT_NEAR(b.ratio, 2 * a.ratio, 1e-14);
  EXPECT_NEAR(b.excursion_ratio, 2 * a.excursion_ratio, 1e-14);
  EXPECT_NEAR(a.ratio, 0.1 / std::sqrt(d.duration()), 1e-15);
  EXPECT_EQ(lamb_dicke_validity(d, 0.0).ratio, 0.0);
}

TEST(Gate, PhaseOnSmallGrid) {
  const IonPair ions = beryllium_pair();
  const TwoIonSystem s(ions);
  const GateDesign d = design_equal_mass(ions, natural_time(ions, 1.0));
  const Grid2D g = small_grid(s, 128, 0, design_excursion(d));
  const GroundState gs = imaginary_time_ground_state(g, s);
  SimulationOptions o;
  o.dt_divisor = 2048;
  o.parallel = false;
  const SimResult r = differential_phase_experiment(d, ForceModel::homogeneous(), gs.psi, o);
  EXPECT_GT(r.abs_overlap, 0.999);
  EXPECT_NEAR(r.differential_phase, -pi, 1e-3);
  EXPECT_LT(r.infidelity, 1e-4);
  ASSERT_EQ(r.runs.size(), 2u);
  for (const ConfigurationRun& c : r.runs)
    EXPECT_NEAR(nearest_branch(c.phase, c.predicted_phase), c.predicted_phase, 1e-3);
}
