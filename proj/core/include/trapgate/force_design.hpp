#pragma once

#include <array>
#include <optional>
#include <string>

#include "trapgate/cosine_series.hpp"
#include "trapgate/normal_modes.hpp"

namespace trapgate {

enum class Mode { plus, minus };
enum class Spin { up, down };

constexpr double sigma_z(Spin s) { return s == Spin::up ? 1.0 : -1.0; }

struct SpinConfig {
  Spin ion1;
  Spin ion2;

  friend constexpr bool operator==(SpinConfig, SpinConfig) = default;
};

inline constexpr SpinConfig up_up{Spin::up, Spin::up};
inline constexpr SpinConfig up_down{Spin::up, Spin::down};
inline constexpr SpinConfig down_up{Spin::down, Spin::up};
inline constexpr SpinConfig down_down{Spin::down, Spin::down};
inline constexpr std::array<SpinConfig, 4> all_spin_configs{up_up, up_down, down_up, down_down};

// +1 for antiparallel, -1 for parallel: the weight of a configuration in the
// differential phase phi(ud) + phi(du) - phi(uu) - phi(dd).
constexpr double differential_weight(SpinConfig c) { return c.ion1 == c.ion2 ? -1.0 : 1.0; }

std::string to_string(SpinConfig c);  // "uu", "ud", "du", "dd"
std::string to_string(Mode m);        // "plus", "minus"

enum class InversionVariant {
  stretch_ansatz,  // ansatz on alpha+(ud), alpha-(ud) = 0
  com_ansatz,      // ansatz on alpha-(ud), alpha+(ud) = 0
  parallel_first,  // ansatz on alpha+(uu), alpha-(uu) = 0
};

std::string to_string(InversionVariant v);
std::optional<InversionVariant> parse_inversion_variant(const std::string& s);

// alpha(t) = a0 + sum_n a_n cos((2n - 1) pi t / tf), natural units.
struct AnsatzCoefficients {
  std::array<double, 5> a{};
  Mode mode = Mode::plus;
  SpinConfig config = up_down;
};

struct CriticalTimes {
  double t1;
  double t2;
  double delta;
};

// F1(up) = -c1 Fa~, F1(down) = -Fa~, F2(up) = -c2 Fb~, F2(down) = -Fb~.
// c1 = c2 = -1 is the symmetric case F_i = sigma_i F.
struct ForceRatio {
  double c1 = -1.0;
  double c2 = -1.0;
};

// prefactor * (g1 + g2 cos 2s + g3 cos 4s) cos s sin^2 s, s = pi t / tf
struct ForceClosedForm {
  double prefactor = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;

  double operator()(double t, double tf) const;
};

// Lab-frame forces on both ions for all spin states, natural units.
// Every force is a fixed multiple of the base shape F_a(t).
class ForceProfile {
 public:
  ForceProfile() = default;
  ForceProfile(double duration, ForceClosedForm base, std::array<double, 2> ion1,
               std::array<double, 2> ion2, Units units);

  double duration() const { return tf_; }
  const ForceClosedForm& base() const { return base_; }
  const Units& units() const { return units_; }

  double base_a(double t) const;
  // F_i(spin; t) = multiplier(i, spin) * base_a(t); zero outside [0, tf]
  double multiplier(int ion, Spin spin) const;
  double force(int ion, Spin spin, double t) const;
  std::array<double, 2> forces(SpinConfig config, double t) const;

  double newton(double natural_force) const { return natural_force * units_.force(); }

 private:
  double tf_ = 1.0;
  ForceClosedForm base_;
  std::array<double, 2> ion1_{};
  std::array<double, 2> ion2_{};
  Units units_{1, 1, 1, 1};
};

struct EqualMassOptions {
  bool negative_branch = false;
};

struct DifferentMassOptions {
  InversionVariant variant = InversionVariant::stretch_ansatz;
  // Signed target phase; when empty the sign follows from the duration and
  // only gamma_magnitude is used.
  std::optional<double> gamma;
  double gamma_magnitude = pi;
  bool negative_branch = false;
  double guard_band = 0.01;
};

class GateDesign {
 public:
  const TwoIonSystem& system() const { return system_; }
  const IonPair& ions() const { return system_.ions; }
  const NormalModeBasis& basis() const { return system_.basis; }
  const EquilibriumGeometry& geometry() const { return system_.geometry; }

  double duration() const { return tf_; }
  double gamma() const { return gamma_; }
  InversionVariant variant() const { return variant_; }
  bool equal_mass() const { return equal_mass_; }
  bool negative_branch() const { return amplitude_ < 0.0; }
  const ForceRatio& ratio() const { return ratio_; }
  // C for different masses, 2/(1 - c) for equal masses, 1 when symmetric
  double scaling() const { return scaling_; }
  const std::optional<CriticalTimes>& critical_times() const { return critical_; }

  // the configuration and mode the ansatz is written for
  SpinConfig driven_config() const { return driven_; }
  Mode ansatz_mode() const { return mode_; }
  // ansatz amplitude s: a_n = s w_n tf^2 (Omega_other^2 - k_n^2), w = (-5, 9, -5, 1)
  double amplitude() const { return amplitude_; }
  AnsatzCoefficients coefficients() const;

  const ForceProfile& force() const { return profile_; }

  // Mode-level closed forms, exact for every configuration.
  CosineSeries base_force_series() const { return drive_; }  // F_a(t)
  CosineSeries mode_force(SpinConfig c, Mode m) const;
  CosineSeries trajectory(SpinConfig c, Mode m) const;  // alpha(t)
  ModeForces mode_forces(SpinConfig c, double t) const;
  double mode_force_factor(SpinConfig c, Mode m) const;

  // phi(c) = (1/2 hbar) int (f+ alpha+ + f- alpha-) dt, summed from the series
  double configuration_phase(SpinConfig c) const;
  double differential_phase() const;

  struct Parts;
  explicit GateDesign(const Parts& parts);

 private:
  TwoIonSystem system_;
  double tf_;
  double gamma_;
  InversionVariant variant_;
  bool equal_mass_;
  ForceRatio ratio_;
  double scaling_;
  std::optional<CriticalTimes> critical_;
  SpinConfig driven_;
  Mode mode_;
  double amplitude_;
  // F_a per unit of the driven mode force, and F_b / F_a
  double lambda_a_;
  double lambda_b_;
  std::array<double, 2> ion1_;  // F_i(up), F_i(down) in units of F_a
  std::array<double, 2> ion2_;
  CosineSeries drive_;          // F_a(t) for the symmetric ratio
  CosineSeries response_plus_;  // alpha+ per unit mode-force factor
  CosineSeries response_minus_;
  ForceProfile profile_;
};

struct GateDesign::Parts {
  TwoIonSystem system;
  double duration;
  double gamma;
  InversionVariant variant;
  bool equal_mass;
  double amplitude;
  std::optional<CriticalTimes> critical;
  ForceRatio ratio{};
  // Optional explicit shape for F_a; converted from the series when empty.
  std::optional<ForceClosedForm> closed_form;
};

// Equal masses, F_i = sigma_i F(t). Requires mu == 1 and gamma < 0.
GateDesign design_equal_mass(const IonPair& ions, double duration, double gamma = -pi,
                             const EqualMassOptions& options = {});

// Different masses, F1 = sigma1 F_a, F2 = sigma2 F_b. Works for any mu >= 1.
GateDesign design_different_mass(const IonPair& ions, double duration,
                                 const DifferentMassOptions& options = {});

// Roots of Delta(tf); empty when they are not real (e.g. equal masses).
std::optional<CriticalTimes> critical_times(const NormalModeBasis& basis);
// Sign-carrying part of the phase-amplitude relation: Delta(tf) of the stretch ansatz.
double phase_denominator(const IonPair& ions, const NormalModeBasis& basis, double duration);

GateDesign apply_force_ratio(const GateDesign& design, double c);
GateDesign apply_force_ratio(const GateDesign& design, double c1, double c2);

// (alpha+(ud; t), alpha-(uu; t)) from the explicit equal-mass expressions.
std::array<double, 2> equal_mass_alphas(const GateDesign& design, double t);

struct ForceIntegral {
  double ion1;
  double ion2;
};

// int_0^tf |F_i(up; t)| dt per ion, natural units (force x time).
ForceIntegral force_integral_proxy(const ForceProfile& profile);
// max_t |F_a(t)| on [0, tf], natural units.
double max_force(const ForceProfile& profile);

// (g1, g2, g3) with prefactor 1 for a series whose value vanishes at t = 0.
ForceClosedForm closed_form_from_series(const CosineSeries& s);

}  // namespace trapgate
