#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "trapgate/cosine_series.hpp"
#include "trapgate/force_design.hpp"
#include "trapgate/quadrature.hpp"

namespace trapgate {

using TimeFunction = std::function<double(double)>;

// Classical trajectory of one driven mode, y'' + W^2 y = f, in natural units.
// The complex quadrature is z = sqrt(W/2) y + i ydot / sqrt(2 W).
class Trajectory {
 public:
  double omega() const { return omega_; }
  double duration() const { return tf_; }

  double force(double t) const { return force_(t); }
  std::complex<double> z(double t) const { return z_(t); }
  double position(double t) const;
  double velocity(double t) const;

  // uniform samples on [0, tf], n + 1 points
  std::vector<double> sample_times(int n) const;
  // z at increasing times; cheaper than repeated z(t) for quadrature-based trajectories
  std::vector<std::complex<double>> z_path(const std::vector<double>& times) const;

  std::optional<Mode> mode;
  std::optional<SpinConfig> config;

  using PathFunction =
      std::function<std::vector<std::complex<double>>(const std::vector<double>&)>;
  Trajectory(double omega, double tf, TimeFunction force,
             std::function<std::complex<double>(double)> z, PathFunction path = {});

 private:
  double omega_;
  double tf_;
  TimeFunction force_;
  std::function<std::complex<double>(double)> z_;
  PathFunction path_;
};

// z(t) = e^{-iWt} { z(0) + i/sqrt(2W) int_0^t e^{iW tau} f dtau }, by adaptive
// quadrature on `nodes` cumulative panels.
Trajectory solve_forced_oscillator(TimeFunction f, double omega, std::complex<double> z0,
                                   double tf, int nodes = 256, const QuadratureOptions& opt = {});

// Closed-form trajectory alpha(t) with its drive f(t) = alpha'' + W^2 alpha.
Trajectory series_trajectory(const CosineSeries& alpha, double omega);

// The mode trajectory of a design in a given configuration, from closed forms.
Trajectory design_trajectory(const GateDesign& design, SpinConfig c, Mode m);

// G(t) = (1/2) int_0^t (ydot^2 - W^2 y^2) dt'
double lr_integral(const Trajectory& tr, double t, const QuadratureOptions& opt = {});

// theta_n(tf) = -(n + 1/2) W tf - G(tf). The overall sign follows the
// convention theta_n = -(1/hbar) int (lambda_n + ydot^2/2 - W^2 y^2/2).
double lewis_riesenfeld_phase(int n, const Trajectory& tr, const QuadratureOptions& opt = {});

// Residuals of alpha, alpha'/W at both ends relative to the peak of |alpha|.
struct BoundaryResidual {
  double start;
  double end;
  double peak;
};
BoundaryResidual boundary_residual(const Trajectory& tr, int samples = 512);

// phi = (1/2) sum_modes int f alpha dt. Throws Errc::boundary_violation when a
// trajectory does not start and end at rest within `tolerance` of its peak.
double gate_phase_single_integral(std::span<const Trajectory> modes, double tolerance = 1e-6,
                                  const QuadratureOptions& opt = {});

struct ModeDrive {
  TimeFunction force;
  double omega;
};

struct DoubleIntegralPhase {
  double triangle;  // int_0^tf dt' int_0^t' dt'' f f sin(W(t'-t''))/(2W)
  double square;    // int int f f sin(W|t'-t''|)/(4W) over the full square
};

DoubleIntegralPhase gate_phase_double_integral(std::span<const ModeDrive> modes, double tf,
                                               const QuadratureOptions& opt = {});

struct QuadraturePath {
  std::vector<double> t;
  std::vector<double> X;
  std::vector<double> P;
  std::vector<double> Xr;
  std::vector<double> Pr;
};

// Dimensionless quadratures X = sqrt(W/2) y, P = ydot/sqrt(2W) and the
// rotating frame Xr + iPr = e^{iWt}(X + iP), at n + 1 uniform times.
QuadraturePath quadrature_path(const Trajectory& tr, int n);

// Signed polygon area of the rotating-frame path (counter-clockwise positive).
double rotating_area(const QuadraturePath& path);

// Area with sampling doubled from >= 4096 points per mode period until the
// change of the h^2-extrapolated estimate drops below `tol`.
double converged_rotating_area(const Trajectory& tr, double tol = 1e-8, int max_doublings = 6);

struct PhaseBreakdown {
  double total;       // -G(tf) of the particular solution
  double dynamical;   // int f <x> dt with <x> from z(0)
  double geometric;   // total - dynamical
  double area;        // rotating-frame area of the z(0) path
  double G;
};

PhaseBreakdown phase_decomposition(TimeFunction f, double omega, std::complex<double> z0,
                                   double tf);

// First-order phase change from a constant force offset: (df/2) int alpha dt.
double offset_sensitivity(const TimeFunction& alpha, double delta_f, double tf,
                          const QuadratureOptions& opt = {});

// [0, 2 pi)
double wrap_phase(double phi);
// phi shifted by a multiple of 2 pi to lie nearest to `reference`
double nearest_branch(double phi, double reference);

// Differential phase of a design by quadrature of each configuration's phase.
double differential_phase_quadrature(const GateDesign& design, const QuadratureOptions& opt = {});

}  // namespace trapgate
