#include "trapgate/schrodinger.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <sstream>

#include "trapgate/errors.hpp"
#include "trapgate/phase_model.hpp"

namespace trapgate {

namespace {

using cplx = std::complex<double>;

struct FftPlans {
  fftw_plan forward;
  fftw_plan backward;
};

// Planning is not thread-safe in FFTW; execution on distinct arrays is.
// FFTW_ESTIMATE keeps the chosen algorithm, and so the rounding, reproducible.
const FftPlans& plans_for(int n1, int n2) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, FftPlans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({n1, n2});
  if (it != cache.end()) return it->second;
  ComplexField scratch(static_cast<std::size_t>(n1) * n2);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  FftPlans plans{fftw_plan_dft_2d(n1, n2, p, p, FFTW_FORWARD, FFTW_ESTIMATE),
                 fftw_plan_dft_2d(n1, n2, p, p, FFTW_BACKWARD, FFTW_ESTIMATE)};
  return cache.emplace(std::pair{n1, n2}, plans).first->second;
}

void fft(const fftw_plan plan, ComplexField& data) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

std::vector<double> wavenumbers(int n, double length) {
  std::vector<double> k(n);
  const double dk = 2.0 * pi / length;
  for (int i = 0; i < n; ++i) k[i] = dk * (i < n / 2 ? i : i - n);
  return k;
}

// Spectral kinetic energy per axis: k1^2/2 and k2^2/(2 mu).
std::array<std::vector<double>, 2> kinetic_axes(const Grid2D& g, double mu) {
  auto k1 = wavenumbers(g.n1, g.n1 * g.dx1());
  auto k2 = wavenumbers(g.n2, g.n2 * g.dx2());
  for (auto& k : k1) k = 0.5 * k * k;
  for (auto& k : k2) k = 0.5 * k * k / mu;
  return {k1, k2};
}

std::vector<double> static_potential(const Grid2D& g, const TwoIonSystem& s) {
  return build_potential(g, s, ForceModel::homogeneous(), 0.0, 0.0);
}

// exp(-i dt V_static) and the per-axis force shapes for one grid.
class SplitOperator {
 public:
  SplitOperator(const Grid2D& g, const TwoIonSystem& s, const ForceModel& model, double dt)
      : grid_(g), plans_(plans_for(g.n1, g.n2)), dt_(dt) {
    const auto v = static_potential(g, s);
    static_phase_.resize(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) static_phase_[k] = std::polar(1.0, -dt * v[k]);
    shape1_.resize(g.n1);
    shape2_.resize(g.n2);
    for (int i = 0; i < g.n1; ++i) shape1_[i] = model.shape(g.x1(i), s.geometry.x1);
    for (int j = 0; j < g.n2; ++j) shape2_[j] = model.shape(g.x2(j), s.geometry.x2);

    const auto [t1, t2] = kinetic_axes(g, s.ions.mass_ratio());
    const double norm = 1.0 / static_cast<double>(g.size());
    auto axis = [](const std::vector<double>& t, double h, double scale) {
      std::vector<cplx> e(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) e[i] = scale * std::polar(1.0, -h * t[i]);
      return e;
    };
    half1_ = axis(t1, 0.5 * dt, norm);
    half2_ = axis(t2, 0.5 * dt, 1.0);
    full1_ = axis(t1, dt, norm);
    full2_ = axis(t2, dt, 1.0);
    e1_.resize(g.n1);
    e2_.resize(g.n2);
  }

  void kinetic(ComplexField& psi, bool half) const {
    const auto& a = half ? half1_ : full1_;
    const auto& b = half ? half2_ : full2_;
    fft(plans_.forward, psi);
    const int n2 = grid_.n2;
    for (int i = 0; i < grid_.n1; ++i) {
      cplx* row = psi.data() + static_cast<std::size_t>(i) * n2;
      for (int j = 0; j < n2; ++j) row[j] *= a[i] * b[j];
    }
    fft(plans_.backward, psi);
  }

  // returns int |psi|^2 after the step
  double potential(ComplexField& psi, double F1, double F2) {
    for (int i = 0; i < grid_.n1; ++i) e1_[i] = std::polar(1.0, -dt_ * F1 * shape1_[i]);
    for (int j = 0; j < grid_.n2; ++j) e2_[j] = std::polar(1.0, -dt_ * F2 * shape2_[j]);
    const int n2 = grid_.n2;
    double sum = 0.0;
    for (int i = 0; i < grid_.n1; ++i) {
      const std::size_t off = static_cast<std::size_t>(i) * n2;
      cplx* row = psi.data() + off;
      const cplx* vs = static_phase_.data() + off;
      for (int j = 0; j < n2; ++j) {
        row[j] *= vs[j] * e1_[i] * e2_[j];
        sum += std::norm(row[j]);
      }
    }
    return sum * grid_.cell();
  }

 private:
  Grid2D grid_;
  const FftPlans& plans_;
  double dt_;
  std::vector<cplx> static_phase_;
  std::vector<double> shape1_, shape2_;
  std::vector<cplx> half1_, half2_, full1_, full2_;
  std::vector<cplx> e1_, e2_;
};

double phase_of(cplx z) { return wrap_phase(std::arg(z)); }

}  // namespace

std::string to_string(ForceKind k) {
  return k == ForceKind::homogeneous ? "homogeneous" : "sinusoidal";
}

std::optional<ForceKind> parse_force_kind(const std::string& s) {
  if (s == "homogeneous") return ForceKind::homogeneous;
  if (s == "sinusoidal") return ForceKind::sinusoidal;
  return std::nullopt;
}

ForceModel ForceModel::sinusoidal(double dk) {
  if (!(dk >= 0.0)) throw Error(Errc::invalid_argument, "wavenumber must be non-negative");
  return {ForceKind::sinusoidal, dk};
}

double ForceModel::shape(double x, double x0) const {
  if (kind == ForceKind::homogeneous || dk == 0.0) return x;
  return x0 + std::sin(dk * (x - x0)) / dk;
}

double ForceModel::slope(double x, double x0) const {
  if (kind == ForceKind::homogeneous || dk == 0.0) return 1.0;
  return std::cos(dk * (x - x0));
}

double periods_wavenumber(const EquilibriumGeometry& geometry, int periods) {
  if (periods <= 0) throw Error(Errc::invalid_argument, "period count must be positive");
  return 2.0 * pi * periods / geometry.separation;
}

LabForceFunction design_forces(const GateDesign& design, SpinConfig config) {
  ForceProfile profile = design.force();
  return [profile, config](double t) { return profile.forces(config, t); };
}

double potential_at(double x1, double x2, const TwoIonSystem& s, const ForceModel& model,
                    double F1, double F2) {
  const double d = x2 - x1;
  if (!(d > 0.0)) return coulomb_cap;
  const double v = 0.5 * (x1 * x1 + x2 * x2) + s.ions.coulomb_natural() / d -
                   s.geometry.energy_offset;
  if (v > coulomb_cap) return coulomb_cap;
  return v + F1 * model.shape(x1, s.geometry.x1) + F2 * model.shape(x2, s.geometry.x2);
}

std::vector<double> build_potential(const Grid2D& g, const TwoIonSystem& s,
                                    const ForceModel& model, double F1, double F2) {
  g.validate();
  std::vector<double> v(g.size());
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      v[static_cast<std::size_t>(i) * g.n2 + j] = potential_at(g.x1(i), g.x2(j), s, model, F1, F2);
  return v;
}

std::vector<double> build_potential(const Grid2D& g, const GateDesign& design, SpinConfig config,
                                    double t, const ForceModel& model) {
  check_grid(g, design.system(), design_excursion(design));
  const auto F = design.force().forces(config, t);
  return build_potential(g, design.system(), model, F[0], F[1]);
}

double energy_expectation(const WaveFunction2D& psi, const TwoIonSystem& s) {
  const Grid2D& g = psi.grid;
  const auto v = static_potential(g, s);
  double n = 0.0, pot = 0.0;
  for (std::size_t k = 0; k < psi.data.size(); ++k) {
    const double p = std::norm(psi.data[k]);
    n += p;
    pot += p * v[k];
  }
  ComplexField spec = psi.data;
  fft(plans_for(g.n1, g.n2).forward, spec);
  const auto [t1, t2] = kinetic_axes(g, s.ions.mass_ratio());
  double kin = 0.0;
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      kin += std::norm(spec[static_cast<std::size_t>(i) * g.n2 + j]) * (t1[i] + t2[j]);
  // Parseval: sum |fft|^2 = N sum |psi|^2
  return kin / (static_cast<double>(g.size()) * n) + pot / n;
}

GroundState imaginary_time_ground_state(const Grid2D& g, const TwoIonSystem& s,
                                        const GroundStateOptions& o) {
  g.validate();
  const auto& plans = plans_for(g.n1, g.n2);
  const double dtau = o.dtau;

  // uncorrelated Gaussian guess with the harmonic ion widths
  const IonWidths w = harmonic_widths(s);
  WaveFunction2D psi(g);
  for (int i = 0; i < g.n1; ++i) {
    const double u = (g.x1(i) - s.geometry.x1) / w.ion1;
    for (int j = 0; j < g.n2; ++j) {
      const double v = (g.x2(j) - s.geometry.x2) / w.ion2;
      psi.at(i, j) = std::exp(-0.25 * (u * u + v * v));
    }
  }
  psi.normalize();

  const auto pot = static_potential(g, s);
  std::vector<double> damp(pot.size());
  for (std::size_t k = 0; k < pot.size(); ++k) damp[k] = std::exp(-dtau * pot[k]);
  auto [t1, t2] = kinetic_axes(g, s.ions.mass_ratio());
  const double scale = 1.0 / static_cast<double>(g.size());
  std::vector<double> h1(g.n1), h2(g.n2);
  for (int i = 0; i < g.n1; ++i) h1[i] = scale * std::exp(-0.5 * dtau * t1[i]);
  for (int j = 0; j < g.n2; ++j) h2[j] = std::exp(-0.5 * dtau * t2[j]);

  auto kinetic_half = [&] {
    fft(plans.forward, psi.data);
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) psi.at(i, j) *= h1[i] * h2[j];
    fft(plans.backward, psi.data);
  };

  GroundState out{{}, energy_expectation(psi, s), {}, 0};
  out.energies.push_back(out.energy);
  for (int step = 1; step <= o.max_steps; ++step) {
    kinetic_half();
    for (std::size_t k = 0; k < psi.data.size(); ++k) psi.data[k] *= damp[k];
    kinetic_half();
    psi.normalize();
    if (step % o.check_interval != 0) continue;
    const double e = energy_expectation(psi, s);
    const double change = std::abs(e - out.energy) / (std::abs(e) * o.check_interval);
    out.energies.push_back(e);
    out.energy = e;
    if (change < o.tolerance) {
      out.steps = step;
      out.psi = std::move(psi);
      return out;
    }
  }
  throw Error(Errc::no_convergence, "imaginary-time relaxation did not converge");
}

Propagation propagate_real_time(const WaveFunction2D& psi0, const TwoIonSystem& s,
                                const LabForceFunction& forces, const ForceModel& model,
                                double tf, int steps, const PropagationOptions& o) {
  psi0.grid.validate();
  if (!(tf > 0.0)) throw Error(Errc::invalid_duration, "duration must be positive");
  if (steps < 1) throw Error(Errc::invalid_argument, "step count must be positive");

  const double dt = tf / steps;
  SplitOperator op(psi0.grid, s, model, dt);
  Propagation out{psi0, 0.0, psi0.boundary_ratio(), steps};
  WaveFunction2D& psi = out.psi;
  const double norm0 = psi0.norm();

  auto check_leak = [&](double t) {
    const double r = psi.boundary_ratio();
    out.max_boundary_ratio = std::max(out.max_boundary_ratio, r);
    if (r > o.leak_threshold) {
      std::ostringstream msg;
      msg << "wavefunction reached the grid boundary (ratio " << r << " at t = " << t << ")";
      throw Error(Errc::boundary_leak, msg.str());
    }
  };

  // T/2 V T/2 per step; the inner half-steps of neighbours merge into one.
  op.kinetic(psi.data, true);
  for (int n = 0; n < steps; ++n) {
    const double t = (n + 0.5) * dt;
    const auto F = forces(t);
    const double norm = op.potential(psi.data, F[0], F[1]);
    out.max_norm_error = std::max(out.max_norm_error, std::abs(norm - norm0));
    if (out.max_norm_error > o.norm_tolerance) {
      std::ostringstream msg;
      msg << "norm drifted by " << out.max_norm_error << " at t = " << t;
      throw Error(Errc::norm_drift, msg.str());
    }
    op.kinetic(psi.data, n + 1 == steps);
    psi.time = (n + 1) * dt;
    if (o.leak_check_interval > 0 && (n + 1) % o.leak_check_interval == 0) check_leak(psi.time);
    if (o.observer && o.observer_interval > 0 && (n + 1) % o.observer_interval == 0 &&
        n + 1 != steps)
      o.observer(psi);
  }
  psi.time = tf;
  const double final_norm = psi.norm();
  out.max_norm_error = std::max(out.max_norm_error, std::abs(final_norm - norm0));
  if (out.max_norm_error > o.norm_tolerance)
    throw Error(Errc::norm_drift, "norm drifted during propagation");
  check_leak(tf);
  if (o.observer) o.observer(psi);
  return out;
}

Propagation propagate_real_time(const WaveFunction2D& psi0, const GateDesign& design,
                                const ForceModel& model, SpinConfig config, int steps,
                                const PropagationOptions& options) {
  check_grid(psi0.grid, design.system(), design_excursion(design));
  WaveFunction2D start = psi0;
  start.config = config;
  return propagate_real_time(start, design.system(), design_forces(design, config), model,
                             design.duration(), steps, options);
}

Overlap overlap_and_phase(const WaveFunction2D& psi0, const WaveFunction2D& psif) {
  const cplx S = inner_product(psi0, psif);
  return {S, std::abs(S), phase_of(S)};
}

double worst_case_infidelity(cplx S, double dphi) {
  const double c = std::cos(dphi - pi);
  return 1.0 - std::norm(S) * c * c;
}

WaveFunction2D fock_initial_state(const Grid2D& g, const TwoIonSystem& s, int n_plus) {
  if (n_plus < 0) throw Error(Errc::invalid_argument, "Fock level must be non-negative");
  g.validate();
  check_grid(g, s, {0.0, 0.0}, n_plus);

  const double wp = s.basis.omega_plus, wm = s.basis.omega_minus;
  // normalised Hermite functions by the three-term recurrence
  auto hermite = [](int n, double w, double x) {
    const double xi = std::sqrt(w) * x;
    double prev = std::pow(w / pi, 0.25) * std::exp(-0.5 * xi * xi);
    if (n == 0) return prev;
    double cur = std::sqrt(2.0) * xi * prev;
    for (int k = 1; k < n; ++k) {
      const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(double(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
    return cur;
  };

  const double jacobian = std::pow(s.ions.mass_ratio(), 0.25);
  WaveFunction2D psi(g);
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const ModePoint q = lab_to_modes({g.x1(i), g.x2(j)}, s.ions, s.geometry, s.basis);
      psi.at(i, j) = jacobian * hermite(n_plus, wp, q.plus) * hermite(0, wm, q.minus);
    }
  return psi;
}

LambDicke lamb_dicke_validity(const GateDesign& design, double dk) {
  if (dk == 0.0) return {0.0, 0.0};
  const IonWidths e = design_excursion(design);
  return {dk / std::sqrt(design.duration()), std::max(e.ion1, e.ion2) * dk / pi};
}

SimResult differential_phase_experiment(const GateDesign& design, const ForceModel& model,
                                        const WaveFunction2D& initial,
                                        const SimulationOptions& o) {
  const auto clock = std::chrono::steady_clock::now();
  check_grid(initial.grid, design.system(), design_excursion(design), o.n_plus);

  const bool symmetric = design.ratio().c1 == -1.0 && design.ratio().c2 == -1.0;
  std::vector<SpinConfig> configs{up_down, up_up};
  if (!symmetric) configs = {up_down, down_up, up_up, down_down};

  const NormalModeBasis& b = design.basis();
  const double tf = design.duration();
  const double zero_point = -((o.n_plus + 0.5) * b.omega_plus + 0.5 * b.omega_minus) * tf;

  auto run_all = [&](int steps) {
    auto one = [&](SpinConfig c) {
      const Propagation p = propagate_real_time(initial, design, model, c, steps, o.propagation);
      const Overlap ov = overlap_and_phase(initial, p.psi);
      return ConfigurationRun{c,
                              ov.S,
                              ov.phase,
                              wrap_phase(zero_point + design.configuration_phase(c)),
                              p.max_norm_error,
                              p.max_boundary_ratio};
    };
    std::vector<ConfigurationRun> runs;
    if (o.parallel) {
      std::vector<std::future<ConfigurationRun>> jobs;
      for (SpinConfig c : configs) jobs.push_back(std::async(std::launch::async, one, c));
      for (auto& j : jobs) runs.push_back(j.get());
    } else {
      for (SpinConfig c : configs) runs.push_back(one(c));
    }
    return runs;
  };

  auto combine = [&](const std::vector<ConfigurationRun>& runs) {
    double d = 0.0;
    for (const auto& r : runs) d += differential_weight(r.config) * r.phase;
    return symmetric ? 2.0 * d : d;
  };

  int steps = o.dt_divisor;
  auto runs = run_all(steps);
  if (o.converge) {
    double prev = nearest_branch(combine(runs), design.gamma());
    int k = 0;
    for (; k < o.max_halvings; ++k) {
      steps *= 2;
      runs = run_all(steps);
      const double next = nearest_branch(combine(runs), design.gamma());
      if (std::abs(next - prev) < o.converge_tol) break;
      prev = next;
    }
    if (k == o.max_halvings)
      throw Error(Errc::no_convergence, "differential phase did not converge under dt halving");
  }

  SimResult r{};
  r.runs = runs;
  r.overlap = runs.front().overlap;
  r.abs_overlap = std::abs(r.overlap);
  r.phase = runs.front().phase;
  const double raw = combine(runs);
  r.differential_phase_wrapped = wrap_phase(raw);
  r.target = design.gamma();
  r.differential_phase = nearest_branch(raw, r.target);
  r.predicted_differential_phase = design.differential_phase();
  r.infidelity = worst_case_infidelity(r.overlap, r.differential_phase);
  r.fidelity = 1.0 - r.infidelity;
  r.grid = initial.grid;
  r.model = model;
  r.steps = steps;
  r.dt = tf / steps;
  r.n_plus = o.n_plus;
  r.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();
  return r;
}

}  // namespace trapgate
