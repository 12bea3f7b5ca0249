#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <optional>
#include <vector>

#include "trapgate/force_design.hpp"

namespace trapgate {

// 64-byte aligned storage so FFT plans made on one buffer run on any other.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), alignment)); }
  void deallocate(T* p, std::size_t) { ::operator delete(p, alignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const {
    return true;
  }
};

using ComplexField = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

// Periodic n1 x n2 grid in natural units; x = min + i * dx, i < n, dx = (max - min) / n.
struct Grid2D {
  int n1 = 256;
  int n2 = 256;
  double x1_min = -1.0;
  double x1_max = 1.0;
  double x2_min = -1.0;
  double x2_max = 1.0;

  double dx1() const { return (x1_max - x1_min) / n1; }
  double dx2() const { return (x2_max - x2_min) / n2; }
  double x1(int i) const { return x1_min + i * dx1(); }
  double x2(int j) const { return x2_min + j * dx2(); }
  double cell() const { return dx1() * dx2(); }
  std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }

  // throws Errc::invalid_argument unless n1, n2 are powers of two and extents ordered
  void validate() const;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

// Row-major: index i1 * n2 + i2.
struct WaveFunction2D {
  Grid2D grid;
  ComplexField data;
  std::optional<SpinConfig> config;
  double time = 0.0;

  WaveFunction2D() = default;
  explicit WaveFunction2D(const Grid2D& g);

  std::complex<double>& at(int i, int j) { return data[static_cast<std::size_t>(i) * grid.n2 + j]; }
  const std::complex<double>& at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * grid.n2 + j];
  }

  double norm() const;  // int |psi|^2
  void normalize();
  // largest |psi| on the outermost rows and columns divided by the largest |psi|
  double boundary_ratio() const;
};

// <a|b> on a common grid; throws Errc::grid_mismatch otherwise.
std::complex<double> inner_product(const WaveFunction2D& a, const WaveFunction2D& b);

struct PositionMoments {
  double mean1;
  double mean2;
  double width1;
  double width2;
};

PositionMoments position_moments(const WaveFunction2D& psi);

// Harmonic ground-state widths of each ion (natural units) with the stretch
// mode in Fock state n_plus.
struct IonWidths {
  double ion1;
  double ion2;
};
IonWidths harmonic_widths(const TwoIonSystem& system, int n_plus = 0);

// Largest |x_i(t) - x_i0| over all configurations of a design, from the
// closed-form mode trajectories.
IonWidths design_excursion(const GateDesign& design, int samples = 1024);

struct GridOptions {
  int n1 = 256;
  int n2 = 256;
  double sigma_margin = 12.0;
  double excursion_factor = 1.2;
};

// Extents centred on the equilibria: margin * sigma * sqrt(2n+1) + factor * excursion.
Grid2D make_grid(const TwoIonSystem& system, IonWidths excursion, int n_plus = 0,
                 const GridOptions& options = {});

// Throws Errc::grid_too_narrow unless each ion has >= 6 sigma plus the
// excursion between its equilibrium and both grid edges.
void check_grid(const Grid2D& grid, const TwoIonSystem& system, IonWidths excursion,
                int n_plus = 0);

}  // namespace trapgate
