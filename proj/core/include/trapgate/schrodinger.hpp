#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trapgate/force_design.hpp"
#include "trapgate/grid.hpp"

namespace trapgate {

enum class ForceKind { homogeneous, sinusoidal };

std::string to_string(ForceKind k);
std::optional<ForceKind> parse_force_kind(const std::string& s);

// Spatial profile of the spin-dependent forces. The sinusoidal potential of
// ion i is F_i [x_i0 + sin(dk (x_i - x_i0)) / dk], so the force at the
// equilibrium is exactly F_i and dk -> 0 recovers F_i x_i.
struct ForceModel {
  ForceKind kind = ForceKind::homogeneous;
  double dk = 0.0;  // natural units

  static ForceModel homogeneous() { return {}; }
  static ForceModel sinusoidal(double dk);

  // potential per unit force at x for an ion resting at x0
  double shape(double x, double x0) const;
  // d shape / dx
  double slope(double x, double x0) const;
};

// dk with `periods` full periods between the equilibria, natural units.
double periods_wavenumber(const EquilibriumGeometry& geometry, int periods);

// Lab forces (F1, F2) at time t, natural units.
using LabForceFunction = std::function<std::array<double, 2>(double)>;

LabForceFunction design_forces(const GateDesign& design, SpinConfig config);

inline constexpr double coulomb_cap = 1e6;

// Potential energy at (x1, x2), natural units, E0 subtracted. Capped at
// coulomb_cap on and beyond the collision line.
double potential_at(double x1, double x2, const TwoIonSystem& system, const ForceModel& model,
                    double F1, double F2);

std::vector<double> build_potential(const Grid2D& grid, const TwoIonSystem& system,
                                    const ForceModel& model, double F1, double F2);
// Throws Errc::grid_too_narrow when the design's excursion does not fit the grid.
std::vector<double> build_potential(const Grid2D& grid, const GateDesign& design,
                                    SpinConfig config, double t, const ForceModel& model);

// <H> with kinetic p1^2/2 + p2^2/(2 mu), spectral.
double energy_expectation(const WaveFunction2D& psi, const TwoIonSystem& system);

struct GroundStateOptions {
  double dtau = 0.005;
  double tolerance = 1e-12;  // relative energy change per step
  int check_interval = 20;
  int max_steps = 200000;
};

struct GroundState {
  WaveFunction2D psi;
  double energy;
  std::vector<double> energies;  // one entry per check
  int steps;
};

// Throws Errc::no_convergence after max_steps.
GroundState imaginary_time_ground_state(const Grid2D& grid, const TwoIonSystem& system,
                                        const GroundStateOptions& options = {});

struct PropagationOptions {
  double norm_tolerance = 1e-8;
  double leak_threshold = 1e-6;
  int leak_check_interval = 64;
  // called with the state every observer_interval steps and at the end
  std::function<void(const WaveFunction2D&)> observer;
  int observer_interval = 0;
};

struct Propagation {
  WaveFunction2D psi;
  double max_norm_error;
  double max_boundary_ratio;
  int steps;
};

// Strang splitting T/2 V T/2 with V sampled at step midpoints, `steps` equal
// steps over [0, tf]. Throws Errc::norm_drift and Errc::boundary_leak.
Propagation propagate_real_time(const WaveFunction2D& psi0, const TwoIonSystem& system,
                                const LabForceFunction& forces, const ForceModel& model,
                                double tf, int steps, const PropagationOptions& options = {});
Propagation propagate_real_time(const WaveFunction2D& psi0, const GateDesign& design,
                                const ForceModel& model, SpinConfig config, int steps,
                                const PropagationOptions& options = {});

struct Overlap {
  std::complex<double> S;
  double magnitude;
  double phase;  // arg S in [0, 2 pi)
};

// Throws Errc::grid_mismatch.
Overlap overlap_and_phase(const WaveFunction2D& psi0, const WaveFunction2D& psif);

// 1 - |S|^2 cos^2(dphi - pi)
double worst_case_infidelity(std::complex<double> S, double dphi);

// mu^{1/4} phi_0(x-) phi_n(x+) in lab coordinates, not renormalised on the grid.
// Throws Errc::grid_too_narrow without a 6 sigma margin for level n.
WaveFunction2D fock_initial_state(const Grid2D& grid, const TwoIonSystem& system, int n_plus);

struct LambDicke {
  double ratio;            // (dk / w1) sqrt(hbar / (tf m1))
  double excursion_ratio;  // peak excursion / (pi / dk)
};
LambDicke lamb_dicke_validity(const GateDesign& design, double dk);

struct ConfigurationRun {
  SpinConfig config;
  std::complex<double> overlap;
  double phase;            // [0, 2 pi)
  double predicted_phase;  // harmonic prediction, [0, 2 pi)
  double max_norm_error;
  double max_boundary_ratio;
};

struct SimulationOptions {
  int dt_divisor = 4096;
  // halve dt until the differential phase moves by less than converge_tol
  bool converge = false;
  double converge_tol = 1e-3;
  int max_halvings = 4;
  int n_plus = 0;  // stretch-mode level of the initial state, for the prediction
  bool parallel = true;
  PropagationOptions propagation;
};

struct SimResult {
  // antiparallel run
  std::complex<double> overlap;
  double abs_overlap;
  double phase;
  std::vector<ConfigurationRun> runs;
  double differential_phase_wrapped;  // [0, 2 pi)
  double differential_phase;          // branch nearest the target
  double target;
  double predicted_differential_phase;
  double fidelity;
  double infidelity;

  Grid2D grid;
  ForceModel model;
  int steps;
  double dt;
  int n_plus;
  double runtime_seconds;
};

// Runs ud and uu (all four configurations for an asymmetric force ratio) and
// combines them as 2 [phi(ud) - phi(uu)].
SimResult differential_phase_experiment(const GateDesign& design, const ForceModel& model,
                                        const WaveFunction2D& initial,
                                        const SimulationOptions& options = {});

}  // namespace trapgate
