#include "trapgate/normal_modes.hpp"

#include <cmath>
#include <string>

#include "trapgate/errors.hpp"

namespace trapgate {

IonPair::IonPair(double m1_kg, double mass_ratio, double omega1, PhysicalConstants constants)
    : m1_(m1_kg), mu_(mass_ratio), omega1_(omega1), constants_(constants) {
  if (!(m1_ > 0.0) || !std::isfinite(m1_)) throw Error(Errc::invalid_argument, "m1 must be positive");
  if (!(mu_ >= 1.0) || !std::isfinite(mu_))
    throw Error(Errc::invalid_argument,
                "mass ratio must be >= 1 (ion 1 is the lighter ion), got " + std::to_string(mu_));
  if (!(omega1_ > 0.0) || !std::isfinite(omega1_))
    throw Error(Errc::invalid_argument, "omega1 must be positive");
  if (!(constants_.hbar > 0.0 && constants_.coulomb_constant > 0.0 &&
        constants_.atomic_mass_unit > 0.0))
    throw Error(Errc::invalid_argument, "physical constants must be positive");
}

IonPair IonPair::from_amu(double m1_amu, double m2_amu, double omega1, PhysicalConstants constants) {
  if (!(m1_amu > 0.0) || !(m2_amu > 0.0)) throw Error(Errc::invalid_argument, "masses must be positive");
  if (m2_amu < m1_amu)
    throw Error(Errc::invalid_argument, "ion 1 must be the lighter ion (m2 >= m1)");
  return IonPair(m1_amu * constants.atomic_mass_unit, m2_amu / m1_amu, omega1, constants);
}

double IonPair::omega2() const { return omega1_ / std::sqrt(mu_); }

Units IonPair::units() const {
  const double L = std::sqrt(constants_.hbar / (m1_ * omega1_));
  return {L, 1.0 / omega1_, m1_, constants_.hbar * omega1_};
}

double IonPair::coulomb_natural() const {
  const Units u = units();
  return constants_.coulomb_constant / (u.energy * u.length);
}

EquilibriumGeometry equilibrium_config(const IonPair& ions) {
  // u0 = 1 in natural units
  const double x2 = std::cbrt(ions.coulomb_natural() / 4.0);
  const double x0 = 2.0 * x2;
  return {-x2, x2, x0, 0.75 * x0 * x0};
}

ModeFrequencies mode_frequencies(const IonPair& ions) {
  const NormalModeBasis b = mode_vectors(ions);
  return {b.omega_plus, b.omega_minus};
}

NormalModeBasis mode_vectors(const IonPair& ions) {
  const double mu = ions.mass_ratio();
  const double inv = 1.0 / mu;
  const double r = std::sqrt(1.0 - inv + inv * inv);
  NormalModeBasis b{};
  b.lambda_plus = 1.0 + inv + r;
  b.lambda_minus = 1.0 + inv - r;
  b.omega_plus = std::sqrt(b.lambda_plus);
  b.omega_minus = std::sqrt(b.lambda_minus);

  const double sp = (1.0 - inv - r) * std::sqrt(mu);
  const double sm = (1.0 - inv + r) * std::sqrt(mu);
  b.a_plus = 1.0 / std::sqrt(1.0 + sp * sp);
  b.a_minus = 1.0 / std::sqrt(1.0 + sm * sm);
  b.b_plus = sp * b.a_plus;
  b.b_minus = sm * b.a_minus;
  return b;
}

ModePoint lab_to_modes(LabPoint p, const IonPair& ions, const EquilibriumGeometry& geom,
                       const NormalModeBasis& b) {
  const double s = std::sqrt(ions.mass_ratio());
  const double d1 = p.x1 - geom.x1;
  const double d2 = s * (p.x2 - geom.x2);
  return {b.a_plus * d1 + b.b_plus * d2, b.a_minus * d1 + b.b_minus * d2};
}

LabPoint modes_to_lab(ModePoint q, const IonPair& ions, const EquilibriumGeometry& geom,
                      const NormalModeBasis& b) {
  const double s = std::sqrt(ions.mass_ratio());
  return {b.b_minus * q.plus - b.b_plus * q.minus + geom.x1,
          (-b.a_minus * q.plus + b.a_plus * q.minus) / s + geom.x2};
}

ModeForces spin_forces_to_mode_forces(double F1, double F2, const IonPair& ions,
                                      const NormalModeBasis& b, const EquilibriumGeometry& geom) {
  const double s = std::sqrt(ions.mass_ratio());
  return {-F1 * b.b_minus + F2 * b.a_minus / s,
          F1 * b.b_plus - F2 * b.a_plus / s,
          0.5 * geom.separation * (F2 - F1)};
}

double potential_energy(LabPoint p, const IonPair& ions, const EquilibriumGeometry& geom) {
  return 0.5 * (p.x1 * p.x1 + p.x2 * p.x2) + ions.coulomb_natural() / (p.x2 - p.x1) -
         geom.energy_offset;
}

TwoIonSystem::TwoIonSystem(const IonPair& pair)
    : ions(pair), geometry(equilibrium_config(pair)), basis(mode_vectors(pair)) {}

}  // namespace trapgate
