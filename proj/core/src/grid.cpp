#include "trapgate/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trapgate/errors.hpp"

namespace trapgate {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void Grid2D::validate() const {
  if (!power_of_two(n1) || !power_of_two(n2))
    throw Error(Errc::invalid_argument, "grid sizes must be powers of two");
  if (!(x1_max > x1_min) || !(x2_max > x2_min))
    throw Error(Errc::invalid_argument, "grid extents must be increasing");
}

WaveFunction2D::WaveFunction2D(const Grid2D& g) : grid(g), data(g.size()) {}

double WaveFunction2D::norm() const {
  double s = 0.0;
  for (const auto& v : data) s += std::norm(v);
  return s * grid.cell();
}

void WaveFunction2D::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw Error(Errc::invalid_argument, "cannot normalise a zero wavefunction");
  const double f = 1.0 / std::sqrt(n);
  for (auto& v : data) v *= f;
}

double WaveFunction2D::boundary_ratio() const {
  double peak = 0.0, edge = 0.0;
  for (const auto& v : data) peak = std::max(peak, std::norm(v));
  const int n1 = grid.n1, n2 = grid.n2;
  for (int i = 0; i < n1; ++i)
    edge = std::max({edge, std::norm(at(i, 0)), std::norm(at(i, n2 - 1))});
  for (int j = 0; j < n2; ++j)
    edge = std::max({edge, std::norm(at(0, j)), std::norm(at(n1 - 1, j))});
  return peak > 0.0 ? std::sqrt(edge / peak) : 0.0;
}

std::complex<double> inner_product(const WaveFunction2D& a, const WaveFunction2D& b) {
  if (!(a.grid == b.grid)) throw Error(Errc::grid_mismatch, "wavefunctions live on different grids");
  std::complex<double> s = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) s += std::conj(a.data[k]) * b.data[k];
  return s * a.grid.cell();
}

PositionMoments position_moments(const WaveFunction2D& psi) {
  const Grid2D& g = psi.grid;
  double n = 0.0, m1 = 0.0, m2 = 0.0, s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < g.n1; ++i) {
    const double x1 = g.x1(i);
    for (int j = 0; j < g.n2; ++j) {
      const double x2 = g.x2(j);
      const double p = std::norm(psi.at(i, j));
      n += p;
      m1 += p * x1;
      m2 += p * x2;
      s1 += p * x1 * x1;
      s2 += p * x2 * x2;
    }
  }
  m1 /= n;
  m2 /= n;
  return {m1, m2, std::sqrt(std::max(0.0, s1 / n - m1 * m1)),
          std::sqrt(std::max(0.0, s2 / n - m2 * m2))};
}

IonWidths harmonic_widths(const TwoIonSystem& s, int n_plus) {
  const NormalModeBasis& b = s.basis;
  const double vp = (2.0 * n_plus + 1.0) / (2.0 * b.omega_plus);
  const double vm = 1.0 / (2.0 * b.omega_minus);
  const double mu = s.ions.mass_ratio();
  // x1 - x10 = b- x+ - b+ x-, sqrt(mu) (x2 - x20) = -a- x+ + a+ x-
  return {std::sqrt(b.b_minus * b.b_minus * vp + b.b_plus * b.b_plus * vm),
          std::sqrt((b.a_minus * b.a_minus * vp + b.a_plus * b.a_plus * vm) / mu)};
}

IonWidths design_excursion(const GateDesign& design, int samples) {
  const TwoIonSystem& s = design.system();
  IonWidths out{0.0, 0.0};
  for (SpinConfig c : all_spin_configs) {
    const CosineSeries ap = design.trajectory(c, Mode::plus);
    const CosineSeries am = design.trajectory(c, Mode::minus);
    for (int k = 0; k <= samples; ++k) {
      const double t = design.duration() * k / samples;
      const LabPoint p = modes_to_lab({ap(t), am(t)}, s.ions, s.geometry, s.basis);
      out.ion1 = std::max(out.ion1, std::abs(p.x1 - s.geometry.x1));
      out.ion2 = std::max(out.ion2, std::abs(p.x2 - s.geometry.x2));
    }
  }
  return out;
}

Grid2D make_grid(const TwoIonSystem& s, IonWidths excursion, int n_plus, const GridOptions& o) {
  const IonWidths w = harmonic_widths(s, n_plus);
  const double h1 = o.sigma_margin * w.ion1 + o.excursion_factor * excursion.ion1;
  const double h2 = o.sigma_margin * w.ion2 + o.excursion_factor * excursion.ion2;
  Grid2D g{o.n1, o.n2, s.geometry.x1 - h1, s.geometry.x1 + h1, s.geometry.x2 - h2,
           s.geometry.x2 + h2};
  g.validate();
  check_grid(g, s, excursion, n_plus);
  return g;
}

void check_grid(const Grid2D& g, const TwoIonSystem& s, IonWidths excursion, int n_plus) {
  const IonWidths w = harmonic_widths(s, n_plus);
  const double need1 = 6.0 * w.ion1 + excursion.ion1;
  const double need2 = 6.0 * w.ion2 + excursion.ion2;
  // the last grid point sits one spacing below x_max
  const double room1 = std::min(s.geometry.x1 - g.x1_min, g.x1_max - g.dx1() - s.geometry.x1);
  const double room2 = std::min(s.geometry.x2 - g.x2_min, g.x2_max - g.dx2() - s.geometry.x2);
  if (room1 < need1 || room2 < need2) {
    std::ostringstream msg;
    msg << "grid leaves " << room1 << ", " << room2 << " around the equilibria but "
        << need1 << ", " << need2 << " (6 sigma + excursion) are needed";
    throw Error(Errc::grid_too_narrow, msg.str());
  }
}

}  // namespace trapgate
