#pragma once

#include "trapgate/units.hpp"

namespace trapgate {

// Two ions in a common harmonic well with Coulomb repulsion. Ion 1 is the
// lighter one and sits at negative x; m2 = mu * m1, u0 = m1 w1^2 = m2 w2^2.
class IonPair {
 public:
  IonPair(double m1_kg, double mass_ratio, double omega1,
          PhysicalConstants constants = PhysicalConstants::codata2018());

  // Rejects m2 < m1: relabel so that the lighter ion is ion 1.
  static IonPair from_amu(double m1_amu, double m2_amu, double omega1,
                          PhysicalConstants constants = PhysicalConstants::codata2018());

  double m1() const { return m1_; }
  double m2() const { return mu_ * m1_; }
  double mass_ratio() const { return mu_; }
  double omega1() const { return omega1_; }
  double omega2() const;
  double spring_constant() const { return m1_ * omega1_ * omega1_; }
  const PhysicalConstants& constants() const { return constants_; }

  Units units() const;
  // Cc / (hbar w1 L): the only trap parameter left in natural units.
  double coulomb_natural() const;

 private:
  double m1_;
  double mu_;
  double omega1_;
  PhysicalConstants constants_;
};

// Natural units throughout (see Units).
struct EquilibriumGeometry {
  double x1;
  double x2;
  double separation;
  double energy_offset;
};

struct NormalModeBasis {
  double lambda_plus;
  double lambda_minus;
  double omega_plus;   // stretch
  double omega_minus;  // centre of mass
  double a_plus;
  double a_minus;
  double b_plus;
  double b_minus;
};

struct ModeFrequencies {
  double plus;
  double minus;
};

struct LabPoint {
  double x1;
  double x2;
};

struct ModePoint {
  double plus;
  double minus;
};

struct ModeForces {
  double plus;
  double minus;
  double tilde;
};

EquilibriumGeometry equilibrium_config(const IonPair& ions);
ModeFrequencies mode_frequencies(const IonPair& ions);
NormalModeBasis mode_vectors(const IonPair& ions);

ModePoint lab_to_modes(LabPoint p, const IonPair& ions, const EquilibriumGeometry& geom,
                       const NormalModeBasis& basis);
LabPoint modes_to_lab(ModePoint q, const IonPair& ions, const EquilibriumGeometry& geom,
                      const NormalModeBasis& basis);

// Lab-frame forces F1, F2 (natural units) to mode forces.
ModeForces spin_forces_to_mode_forces(double F1, double F2, const IonPair& ions,
                                      const NormalModeBasis& basis,
                                      const EquilibriumGeometry& geom);

// Trap plus Coulomb energy minus the equilibrium offset, natural units.
double potential_energy(LabPoint p, const IonPair& ions, const EquilibriumGeometry& geom);

// Everything derived from an IonPair, computed once.
struct TwoIonSystem {
  IonPair ions;
  EquilibriumGeometry geometry;
  NormalModeBasis basis;

  explicit TwoIonSystem(const IonPair& pair);
};

}  // namespace trapgate
