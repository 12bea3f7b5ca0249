#include "trapgate/force_design.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "trapgate/errors.hpp"
#include "trapgate/quadrature.hpp"

namespace trapgate {

namespace {

constexpr std::array<double, 4> ansatz_weights{-5.0, 9.0, -5.0, 1.0};

constexpr int spin_index(Spin s) { return s == Spin::up ? 0 : 1; }

SpinConfig driven_config_of(InversionVariant v) {
  return v == InversionVariant::parallel_first ? up_up : up_down;
}

Mode ansatz_mode_of(InversionVariant v) {
  return v == InversionVariant::com_ansatz ? Mode::minus : Mode::plus;
}

double a_of(const NormalModeBasis& b, Mode m) { return m == Mode::plus ? b.a_plus : b.a_minus; }
double b_of(const NormalModeBasis& b, Mode m) { return m == Mode::plus ? b.b_plus : b.b_minus; }
double omega_of(const NormalModeBasis& b, Mode m) {
  return m == Mode::plus ? b.omega_plus : b.omega_minus;
}
Mode other(Mode m) { return m == Mode::plus ? Mode::minus : Mode::plus; }

void check_duration(double tf) {
  if (!(tf > 0.0) || !std::isfinite(tf))
    throw Error(Errc::invalid_duration, "gate duration must be positive and finite");
}

// 2051 pi^4 - 119 pi^2 tf^2 (W-^2 + W+^2) + 11 tf^4 W-^2 W+^2
double quartic(const NormalModeBasis& b, double tf) {
  const double p2 = pi * pi;
  const double lm = b.lambda_minus, lp = b.lambda_plus;
  const double t2 = tf * tf;
  return 2051.0 * p2 * p2 - 119.0 * p2 * t2 * (lm + lp) + 11.0 * t2 * t2 * lm * lp;
}

}  // namespace

std::string to_string(SpinConfig c) {
  std::string s;
  s += c.ion1 == Spin::up ? 'u' : 'd';
  s += c.ion2 == Spin::up ? 'u' : 'd';
  return s;
}

std::string to_string(Mode m) { return m == Mode::plus ? "plus" : "minus"; }

std::string to_string(InversionVariant v) {
  switch (v) {
    case InversionVariant::stretch_ansatz: return "stretch_ansatz";
    case InversionVariant::com_ansatz: return "com_ansatz";
    case InversionVariant::parallel_first: return "parallel_first";
  }
  return "unknown";
}

std::optional<InversionVariant> parse_inversion_variant(const std::string& s) {
  for (auto v : {InversionVariant::stretch_ansatz, InversionVariant::com_ansatz,
                 InversionVariant::parallel_first})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

double ForceClosedForm::operator()(double t, double tf) const {
  const double s = pi * t / tf;
  const double sn = std::sin(s);
  return prefactor * (g1 + g2 * std::cos(2.0 * s) + g3 * std::cos(4.0 * s)) * std::cos(s) * sn * sn;
}

ForceProfile::ForceProfile(double duration, ForceClosedForm base, std::array<double, 2> ion1,
                           std::array<double, 2> ion2, Units units)
    : tf_(duration), base_(base), ion1_(ion1), ion2_(ion2), units_(units) {}

double ForceProfile::base_a(double t) const {
  if (t < 0.0 || t > tf_) return 0.0;
  return base_(t, tf_);
}

double ForceProfile::multiplier(int ion, Spin spin) const {
  if (ion != 1 && ion != 2) throw Error(Errc::invalid_argument, "ion index must be 1 or 2");
  return (ion == 1 ? ion1_ : ion2_)[spin_index(spin)];
}

double ForceProfile::force(int ion, Spin spin, double t) const {
  return multiplier(ion, spin) * base_a(t);
}

std::array<double, 2> ForceProfile::forces(SpinConfig c, double t) const {
  const double f = base_a(t);
  return {ion1_[spin_index(c.ion1)] * f, ion2_[spin_index(c.ion2)] * f};
}

ForceClosedForm closed_form_from_series(const CosineSeries& s) {
  const auto& q = s.coefficients();
  return {1.0, 4.0 * (q[0] - q[3]), -8.0 * (q[2] + q[3]), -8.0 * q[3]};
}

GateDesign::GateDesign(const Parts& p)
    : system_(p.system),
      tf_(p.duration),
      gamma_(p.gamma),
      variant_(p.variant),
      equal_mass_(p.equal_mass),
      ratio_(p.ratio),
      scaling_(1.0),
      critical_(p.critical),
      driven_(driven_config_of(p.variant)),
      mode_(ansatz_mode_of(p.variant)),
      amplitude_(p.amplitude) {
  check_duration(tf_);
  const NormalModeBasis& b = system_.basis;
  const double wm = omega_of(b, mode_);
  const double wo = omega_of(b, other(mode_));

  CosineSeries::Coefficients g{}, rm{}, ro{};
  for (int n = 1; n <= CosineSeries::terms; ++n) {
    const double k = (2 * n - 1) * pi / tf_;
    const double w = amplitude_ * tf_ * tf_ * ansatz_weights[n - 1];
    rm[n - 1] = w * (wo * wo - k * k);
    ro[n - 1] = w * (wm * wm - k * k);
    g[n - 1] = rm[n - 1] * (wm * wm - k * k);
  }
  const CosineSeries drive(tf_, g);
  (mode_ == Mode::plus ? response_plus_ : response_minus_) = CosineSeries(tf_, rm);
  (mode_ == Mode::plus ? response_minus_ : response_plus_) = CosineSeries(tf_, ro);

  // Lab forces in the driven configuration that produce (f_M, f_o) = (g, 0).
  const double sq = std::sqrt(system_.ions.mass_ratio());
  lambda_a_ = -sigma_z(driven_.ion1) * a_of(b, mode_);
  lambda_b_ = -sigma_z(driven_.ion2) * sq * b_of(b, mode_);
  drive_ = drive.scaled(lambda_a_);

  const double rb = lambda_b_ / lambda_a_;
  if (equal_mass_) {
    const double c = ratio_.c1;
    if (c == 1.0) throw Error(Errc::degenerate_ratio, "force ratio c = 1 gives no spin dependence");
    if (ratio_.c2 != c) throw Error(Errc::invalid_argument, "equal masses take a single ratio c");
    const double tilde = 2.0 / (1.0 - c);
    scaling_ = tilde;
    ion1_ = {-c * tilde, -tilde};
    ion2_ = {-c * tilde * rb, -tilde * rb};
  } else {
    const double c1 = ratio_.c1, c2 = ratio_.c2;
    if (c1 == 1.0 || c2 == 1.0 || c1 == 0.0)
      throw Error(Errc::degenerate_ratio, "force ratio requires c1 != 1, c2 != 1, c1 != 0");
    const double c_sq = -4.0 * c1 / ((c1 - 1.0) * (c2 - 1.0));
    if (!(c_sq > 0.0)) throw Error(Errc::non_real_scaling, "C^2 = " + std::to_string(c_sq));
    const double C = std::sqrt(c_sq);
    scaling_ = C;
    // Fa~ = -(C/c1) Fa, Fb~ = C Fb
    ion1_ = {C, C / c1};
    ion2_ = {-c2 * C * rb, -C * rb};
  }

  const ForceClosedForm shape = p.closed_form ? *p.closed_form : closed_form_from_series(drive_);
  profile_ = ForceProfile(tf_, shape, ion1_, ion2_, system_.ions.units());
}

double GateDesign::mode_force_factor(SpinConfig c, Mode m) const {
  const double F1 = ion1_[spin_index(c.ion1)] * lambda_a_;
  const double F2 = ion2_[spin_index(c.ion2)] * lambda_a_;
  const ModeForces f =
      spin_forces_to_mode_forces(F1, F2, system_.ions, system_.basis, system_.geometry);
  return m == Mode::plus ? f.plus : f.minus;
}

CosineSeries GateDesign::mode_force(SpinConfig c, Mode m) const {
  return drive_.scaled(mode_force_factor(c, m) / lambda_a_);
}

CosineSeries GateDesign::trajectory(SpinConfig c, Mode m) const {
  return (m == Mode::plus ? response_plus_ : response_minus_).scaled(mode_force_factor(c, m));
}

ModeForces GateDesign::mode_forces(SpinConfig c, double t) const {
  const auto F = profile_.forces(c, t);
  return spin_forces_to_mode_forces(F[0], F[1], system_.ions, system_.basis, system_.geometry);
}

AnsatzCoefficients GateDesign::coefficients() const {
  AnsatzCoefficients out;
  out.mode = mode_;
  out.config = driven_;
  const auto& c = trajectory(driven_, mode_).coefficients();
  out.a[0] = 0.0;
  std::copy(c.begin(), c.end(), out.a.begin() + 1);
  return out;
}

double GateDesign::configuration_phase(SpinConfig c) const {
  double phi = 0.0;
  for (Mode m : {Mode::plus, Mode::minus})
    phi += CosineSeries::overlap(mode_force(c, m), trajectory(c, m));
  return 0.5 * phi;
}

double GateDesign::differential_phase() const {
  double d = 0.0;
  for (SpinConfig c : all_spin_configs) d += differential_weight(c) * configuration_phase(c);
  return d;
}

std::optional<CriticalTimes> critical_times(const NormalModeBasis& b) {
  const double lm = b.lambda_minus, lp = b.lambda_plus;
  if (lm == lp) throw Error(Errc::degenerate_modes, "normal-mode frequencies coincide");
  const double d2 = 7.0 * (2023.0 * lm * lm - 8846.0 * lm * lp + 2023.0 * lp * lp);
  if (d2 < 0.0) return std::nullopt;
  const double delta = std::sqrt(d2);
  const double s = 119.0 * (lm + lp);
  const double den = 22.0 * lm * lp;
  const double t1 = pi * std::sqrt((s - delta) / den);
  const double t2 = pi * std::sqrt((s + delta) / den);
  return CriticalTimes{t1, t2, delta};
}

double phase_denominator(const IonPair& ions, const NormalModeBasis& b, double tf) {
  const double mu = ions.mass_ratio();
  return 6.0 * mu * (b.lambda_minus - b.lambda_plus) * tf * quartic(b, tf);
}

namespace {

double phase_per_unit_amplitude(GateDesign::Parts parts) {
  parts.amplitude = 1.0;
  parts.closed_form = ForceClosedForm{};
  return GateDesign(parts).differential_phase();
}

}  // namespace

GateDesign design_equal_mass(const IonPair& ions, double tf, double gamma,
                             const EqualMassOptions& options) {
  check_duration(tf);
  if (std::abs(ions.mass_ratio() - 1.0) > 1e-12)
    throw Error(Errc::invalid_argument, "equal-mass design needs mu = 1");
  if (gamma == 0.0 || !std::isfinite(gamma))
    throw Error(Errc::invalid_argument, "target phase must be nonzero and finite");
  if (gamma > 0.0)
    throw Error(Errc::non_real_coefficient,
                "equal-mass gates need gamma < 0: the phase polynomial is negative for all tf");

  GateDesign::Parts parts{TwoIonSystem(ions), tf, gamma, InversionVariant::stretch_ansatz,
                          true, 1.0, std::nullopt, ForceRatio{}, std::nullopt};

  const double p2 = pi * pi;
  const double x = tf * tf;  // (tf omega)^2
  const double poly = -2051.0 * p2 * p2 + 476.0 * p2 * x - 33.0 * x * x;
  // Delta phi = 12 s^2 tf poly
  const double s = std::sqrt(gamma / (12.0 * tf * poly));
  parts.amplitude = options.negative_branch ? -s : s;

  ForceClosedForm shape;
  shape.g1 = 3.0 * (401.0 * p2 * p2 - 36.0 * p2 * x + 3.0 * x * x);
  shape.g2 = -4.0 * (181.0 * p2 * p2 - 76.0 * p2 * x + 3.0 * x * x);
  shape.g3 = 2401.0 * p2 * p2 - 196.0 * p2 * x + 3.0 * x * x;
  shape.prefactor = 2.0 * std::sqrt(2.0 * std::abs(gamma) / 3.0) / (x * std::sqrt(-tf * poly));
  if (options.negative_branch) shape.prefactor = -shape.prefactor;
  parts.closed_form = shape;
  return GateDesign(parts);
}

GateDesign design_different_mass(const IonPair& ions, double tf,
                                 const DifferentMassOptions& options) {
  check_duration(tf);
  const TwoIonSystem system(ions);
  const auto crit = critical_times(system.basis);
  if (crit) {
    for (double tc : {crit->t1, crit->t2}) {
      if (std::abs(tf - tc) < options.guard_band * tc) {
        const double us = ions.units().time * 1e6;
        std::ostringstream msg;
        msg.precision(6);
        msg << "tf = " << tf * us << " us is within " << options.guard_band * 100
            << "% of a critical time (t1 = " << crit->t1 * us << " us, t2 = " << crit->t2 * us
            << " us)";
        throw Error(Errc::critical_time_proximity, msg.str());
      }
    }
  }

  GateDesign::Parts parts{system, tf, 0.0, options.variant, false, 1.0, crit, ForceRatio{}, std::nullopt};
  const double K = phase_per_unit_amplitude(parts);
  if (K == 0.0 || !std::isfinite(K))
    throw Error(Errc::critical_time_proximity, "phase vanishes identically at this duration");

  double gamma = 0.0;
  if (options.gamma) {
    gamma = *options.gamma;
    if (gamma == 0.0) throw Error(Errc::invalid_argument, "target phase must be nonzero");
    if ((gamma > 0.0) != (K > 0.0)) {
      std::ostringstream msg;
      msg << "gamma = " << gamma << " has the wrong sign for this duration; use "
          << (K > 0.0 ? "gamma > 0" : "gamma < 0");
      throw Error(Errc::non_real_coefficient, msg.str());
    }
  } else {
    if (!(options.gamma_magnitude > 0.0))
      throw Error(Errc::invalid_argument, "gamma magnitude must be positive");
    gamma = std::copysign(options.gamma_magnitude, K);
  }
  parts.gamma = gamma;
  const double s = std::sqrt(gamma / K);
  parts.amplitude = options.negative_branch ? -s : s;

  if (options.variant == InversionVariant::stretch_ansatz) {
    const NormalModeBasis& b = system.basis;
    const double p2 = pi * pi;
    const double x = tf * tf;
    const double lm = b.lambda_minus, lp = b.lambda_plus;
    ForceClosedForm shape;
    shape.g1 = 3.0 * (401.0 * p2 * p2 + x * x * lm * lp - 9.0 * p2 * x * (lm + lp));
    shape.g2 = 4.0 * (-181.0 * p2 * p2 - x * x * lm * lp + 19.0 * p2 * x * (lm + lp));
    shape.g3 = (49.0 * p2 - x * lm) * (49.0 * p2 - x * lp);
    const double a4 = parts.amplitude * (x * lm - 49.0 * p2);
    shape.prefactor = 8.0 * a4 * b.a_plus / (-49.0 * p2 * x + x * x * lm);
    parts.closed_form = shape;
  }
  return GateDesign(parts);
}

namespace {

GateDesign with_ratio(const GateDesign& d, ForceRatio r) {
  GateDesign::Parts parts{d.system(), d.duration(), d.gamma(), d.variant(), d.equal_mass(),
                          d.amplitude(), d.critical_times(), r, d.force().base()};
  return GateDesign(parts);
}

}  // namespace

GateDesign apply_force_ratio(const GateDesign& design, double c) {
  if (!design.equal_mass()) return apply_force_ratio(design, c, c);
  if (c == 1.0) throw Error(Errc::degenerate_ratio, "force ratio c = 1 gives no spin dependence");
  return with_ratio(design, {c, c});
}

GateDesign apply_force_ratio(const GateDesign& design, double c1, double c2) {
  if (design.equal_mass() && c1 != c2)
    throw Error(Errc::invalid_argument, "equal masses share one laser: c1 must equal c2");
  return with_ratio(design, {c1, c2});
}

std::array<double, 2> equal_mass_alphas(const GateDesign& design, double t) {
  if (!design.equal_mass() || design.variant() != InversionVariant::stretch_ansatz)
    throw Error(Errc::invalid_argument, "explicit alphas exist for the equal-mass design only");
  const double tf = design.duration();
  if (t < 0.0 || t > tf) throw Error(Errc::out_of_range, "t outside [0, tf]");

  const double p2 = pi * pi;
  const double x = tf * tf;
  const double a4 = design.amplitude() * (x - 49.0 * p2);
  const double s = pi * t / tf;
  const double sn = std::sin(s);
  const double env = 32.0 * a4 * std::cos(s) * sn * sn * sn * sn / (49.0 * p2 - x);
  const double c2 = std::cos(2.0 * s);
  const double plus = (11.0 * p2 + x + (49.0 * p2 - x) * c2) * env;
  const double minus = (11.0 * p2 + 3.0 * x + (49.0 * p2 - 3.0 * x) * c2) * env;

  // the explicit forms are for c = -1; other ratios rescale each mode
  const GateDesign sym = apply_force_ratio(design, -1.0);
  return {plus * design.mode_force_factor(up_down, Mode::plus) /
              sym.mode_force_factor(up_down, Mode::plus),
          minus * design.mode_force_factor(up_up, Mode::minus) /
              sym.mode_force_factor(up_up, Mode::minus)};
}

namespace {

// Zeros of F_a on (0, tf/2): cos s sin^2 s never vanishes there, so they are
// the roots u = cos 2s of g1 + g2 u + g3 (2u^2 - 1).
std::vector<double> half_interval_breaks(const ForceProfile& p) {
  const auto& f = p.base();
  const double tf = p.duration();
  std::vector<double> us;
  const double A = 2.0 * f.g3, B = f.g2, C = f.g1 - f.g3;
  if (A == 0.0) {
    if (B != 0.0) us.push_back(-C / B);
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
      if (q != 0.0) us.push_back(C / q);
      us.push_back(q / A);
    }
  }
  std::vector<double> ts{0.0};
  for (double u : us)
    if (u > -1.0 && u < 1.0) ts.push_back(std::acos(u) / 2.0 * tf / pi);
  ts.push_back(0.5 * tf);
  std::sort(ts.begin(), ts.end());
  return ts;
}

}  // namespace

ForceIntegral force_integral_proxy(const ForceProfile& p) {
  if (p.base().prefactor == 0.0) return {0.0, 0.0};
  const auto ts = half_interval_breaks(p);
  QuadratureOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-12;
  opt.panels = 1;
  double half = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] <= ts[i]) continue;
    half += std::abs(integrate([&](double t) { return p.base_a(t); }, ts[i], ts[i + 1], opt).value);
  }
  const double total = 2.0 * half;  // |F_a| is symmetric about tf/2
  return {std::abs(p.multiplier(1, Spin::up)) * total, std::abs(p.multiplier(2, Spin::up)) * total};
}

double max_force(const ForceProfile& p) {
  const double tf = p.duration();
  constexpr int samples = 2048;
  const double h = 0.5 * tf / samples;
  int best = 0;
  double best_val = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double v = std::abs(p.base_a(i * h));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = std::max(0.0, (best - 1) * h);
  const double hi = std::min(0.5 * tf, (best + 1) * h);
  const auto r = boost::math::tools::brent_find_minima(
      [&](double t) { return -std::abs(p.base_a(t)); }, lo, hi, 50);
  return std::max(best_val, -r.second);
}

}  // namespace trapgate
