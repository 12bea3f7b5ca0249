#include "trapgate/phase_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trapgate/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace trapgate {

namespace {
using GL = boost::math::quadrature::gauss<double, 10>;
}  // namespace

Trajectory::Trajectory(double omega, double tf, TimeFunction force,
                       std::function<std::complex<double>(double)> z, PathFunction path)
    : omega_(omega), tf_(tf), force_(std::move(force)), z_(std::move(z)), path_(std::move(path)) {}

std::vector<std::complex<double>> Trajectory::z_path(const std::vector<double>& times) const {
  if (path_) return path_(times);
  std::vector<std::complex<double>> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = z_(times[i]);
  return out;
}

double Trajectory::position(double t) const { return std::sqrt(2.0 / omega_) * z_(t).real(); }

double Trajectory::velocity(double t) const { return std::sqrt(2.0 * omega_) * z_(t).imag(); }

std::vector<double> Trajectory::sample_times(int n) const {
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = tf_ * i / n;
  t[n] = tf_;
  return t;
}

Trajectory solve_forced_oscillator(TimeFunction f, double omega, std::complex<double> z0,
                                   double tf, int nodes, const QuadratureOptions& opt) {
  if (!(omega > 0.0)) throw Error(Errc::invalid_argument, "mode frequency must be positive");
  if (!(tf > 0.0)) throw Error(Errc::invalid_duration, "duration must be positive");
  nodes = std::max(nodes, 1);

  QuadratureOptions piece = opt;
  piece.panels = 1;
  const double h = tf / nodes;
  auto integrand = [f, omega](double t) { return std::polar(1.0, omega * t) * f(t); };

  // cumulative Duhamel integral at the nodes
  auto cumulative = std::make_shared<std::vector<std::complex<double>>>(nodes + 1);
  (*cumulative)[0] = 0.0;
  for (int j = 0; j < nodes; ++j)
    (*cumulative)[j + 1] = (*cumulative)[j] + integrate_complex(integrand, j * h, (j + 1) * h, piece);

  const std::complex<double> kick(0.0, 1.0 / std::sqrt(2.0 * omega));
  auto z = [=](double t) {
    const double tc = std::clamp(t, 0.0, tf);
    const int j = std::min(static_cast<int>(tc / h), nodes - 1);
    std::complex<double> I = (*cumulative)[j];
    if (tc > j * h) I += integrate_complex(integrand, j * h, tc, piece);
    // beyond tf the force is off and the oscillator rotates freely
    return std::polar(1.0, -omega * t) * (z0 + kick * I);
  };
  // Consecutive sample times are close, so a fixed Gauss-Legendre rule per
  // step is exact to rounding for the smooth drives used here.
  auto path = [=](const std::vector<double>& times) {
    std::vector<std::complex<double>> out(times.size());
    std::complex<double> I = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double tc = std::clamp(times[i], 0.0, tf);
      if (tc < prev || tc - prev > h) {
        // not a short forward step: restart from the stored nodes
        const int j = std::min(static_cast<int>(tc / h), nodes - 1);
        I = (*cumulative)[j];
        if (tc > j * h) I += integrate_complex(integrand, j * h, tc, piece);
      } else if (tc > prev) {
        I += GL::integrate(integrand, prev, tc);
      }
      prev = tc;
      out[i] = std::polar(1.0, -omega * times[i]) * (z0 + kick * I);
    }
    return out;
  };
  return Trajectory(omega, tf, std::move(f), z, path);
}

Trajectory series_trajectory(const CosineSeries& alpha, double omega) {
  auto force = [alpha, omega](double t) {
    return alpha.derivative(t, 2) + omega * omega * alpha(t);
  };
  auto z = [alpha, omega](double t) {
    return std::complex<double>(std::sqrt(omega / 2.0) * alpha(t),
                                alpha.derivative(t, 1) / std::sqrt(2.0 * omega));
  };
  return Trajectory(omega, alpha.duration(), force, z);
}

Trajectory design_trajectory(const GateDesign& design, SpinConfig c, Mode m) {
  const double w = m == Mode::plus ? design.basis().omega_plus : design.basis().omega_minus;
  Trajectory tr = series_trajectory(design.trajectory(c, m), w);
  tr.mode = m;
  tr.config = c;
  return tr;
}

double lr_integral(const Trajectory& tr, double t, const QuadratureOptions& opt) {
  // ydot^2 - W^2 y^2 = 2W (Im z^2 - Re z^2)
  auto integrand = [&](double s) {
    const auto z = tr.z(s);
    return tr.omega() * (z.imag() * z.imag() - z.real() * z.real());
  };
  return integrate(integrand, 0.0, t, opt).value;
}

double lewis_riesenfeld_phase(int n, const Trajectory& tr, const QuadratureOptions& opt) {
  if (n < 0) throw Error(Errc::invalid_argument, "level index must be non-negative");
  return -(n + 0.5) * tr.omega() * tr.duration() - lr_integral(tr, tr.duration(), opt);
}

BoundaryResidual boundary_residual(const Trajectory& tr, int samples) {
  double peak = 0.0;
  for (double t : tr.sample_times(samples)) peak = std::max(peak, std::abs(tr.position(t)));
  auto res = [&](double t) {
    return std::max(std::abs(tr.position(t)), std::abs(tr.velocity(t)) / tr.omega());
  };
  return {res(0.0), res(tr.duration()), peak};
}

double gate_phase_single_integral(std::span<const Trajectory> modes, double tolerance,
                                  const QuadratureOptions& opt) {
  double phi = 0.0;
  for (const auto& tr : modes) {
    const auto r = boundary_residual(tr);
    const double limit = tolerance * std::max(r.peak, 1e-300);
    if (r.peak > 0.0 && (r.start > limit || r.end > limit)) {
      std::ostringstream msg;
      msg << "trajectory does not rest at the boundaries: residual " << std::max(r.start, r.end)
          << " against peak " << r.peak;
      throw Error(Errc::boundary_violation, msg.str());
    }
    phi += 0.5 * integrate([&](double t) { return tr.force(t) * tr.position(t); }, 0.0,
                           tr.duration(), opt)
                     .value;
  }
  return phi;
}

DoubleIntegralPhase gate_phase_double_integral(std::span<const ModeDrive> modes, double tf,
                                               const QuadratureOptions& opt) {
  DoubleIntegralPhase out{0.0, 0.0};
  for (const auto& m : modes) {
    const double w = m.omega;
    const auto& f = m.force;
    out.triangle += integrate_triangle(
                        [&](double x, double y) { return f(x) * f(y) * std::sin(w * (x - y)); },
                        0.0, tf, opt)
                        .value /
                    (2.0 * w);

    // kernel has a kink on the diagonal: split the inner integral there
    QuadratureOptions inner = opt;
    inner.panels = 1;
    auto outer = [&](double x) {
      auto k = [&](double y) { return f(y) * std::sin(w * std::abs(x - y)); };
      return f(x) * (integrate(k, 0.0, x, inner).value + integrate(k, x, tf, inner).value);
    };
    out.square += integrate(outer, 0.0, tf, opt).value / (4.0 * w);
  }
  return out;
}

QuadraturePath quadrature_path(const Trajectory& tr, int n) {
  QuadraturePath p;
  p.t = tr.sample_times(n);
  const std::size_t m = p.t.size();
  p.X.resize(m);
  p.P.resize(m);
  p.Xr.resize(m);
  p.Pr.resize(m);
  const auto zs = tr.z_path(p.t);
  for (std::size_t i = 0; i < m; ++i) {
    const auto z = zs[i];
    const auto zr = std::polar(1.0, tr.omega() * p.t[i]) * z;
    p.X[i] = z.real();
    p.P[i] = z.imag();
    p.Xr[i] = zr.real();
    p.Pr[i] = zr.imag();
  }
  return p;
}

double rotating_area(const QuadraturePath& p) {
  double a = 0.0;
  const std::size_t m = p.t.size();
  for (std::size_t i = 0; i + 1 < m; ++i) a += p.Xr[i] * p.Pr[i + 1] - p.Xr[i + 1] * p.Pr[i];
  // close the polygon
  if (m > 1) a += p.Xr[m - 1] * p.Pr[0] - p.Xr[0] * p.Pr[m - 1];
  return 0.5 * a;
}

double converged_rotating_area(const Trajectory& tr, double tol, int max_doublings) {
  const double periods = tr.omega() * tr.duration() / (2.0 * pi);
  int n = static_cast<int>(std::ceil(4096.0 * std::max(periods, 1.0)));
  // the polygon error is O(h^2); compare Richardson-extrapolated estimates
  double coarse = rotating_area(quadrature_path(tr, n));
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < max_doublings; ++i) {
    n *= 2;
    const double fine = rotating_area(quadrature_path(tr, n));
    const double next = fine + (fine - coarse) / 3.0;
    if (std::abs(next - prev) < tol) return next;
    prev = next;
    coarse = fine;
  }
  throw Error(Errc::no_convergence, "rotating-frame area did not converge");
}

PhaseBreakdown phase_decomposition(TimeFunction f, double omega, std::complex<double> z0,
                                   double tf) {
  const Trajectory particular = solve_forced_oscillator(f, omega, 0.0, tf);
  const Trajectory general = solve_forced_oscillator(f, omega, z0, tf);

  PhaseBreakdown b{};
  b.G = lr_integral(particular, tf);
  b.total = -b.G;
  b.dynamical =
      integrate([&](double t) { return f(t) * general.position(t); }, 0.0, tf).value;
  b.geometric = b.total - b.dynamical;
  b.area = converged_rotating_area(general);
  return b;
}

double offset_sensitivity(const TimeFunction& alpha, double delta_f, double tf,
                          const QuadratureOptions& opt) {
  if (delta_f == 0.0) return 0.0;
  return 0.5 * delta_f * integrate(alpha, 0.0, tf, opt).value;
}

double wrap_phase(double phi) {
  double w = std::fmod(phi, 2.0 * pi);
  if (w < 0.0) w += 2.0 * pi;
  if (w >= 2.0 * pi) w = 0.0;
  return w;
}

double nearest_branch(double phi, double reference) {
  return phi - 2.0 * pi * std::round((phi - reference) / (2.0 * pi));
}

double differential_phase_quadrature(const GateDesign& design, const QuadratureOptions& opt) {
  double d = 0.0;
  for (SpinConfig c : all_spin_configs) {
    double phi = 0.0;
    for (Mode m : {Mode::plus, Mode::minus}) {
      const auto alpha = design.trajectory(c, m);
      // lab forces mapped to the mode, independent of the series form of f
      auto integrand = [&](double t) {
        const ModeForces f = design.mode_forces(c, t);
        return (m == Mode::plus ? f.plus : f.minus) * alpha(t);
      };
      phi += 0.5 * integrate(integrand, 0.0, design.duration(), opt).value;
    }
    d += differential_weight(c) * phi;
  }
  return d;
}

}  // namespace trapgate
