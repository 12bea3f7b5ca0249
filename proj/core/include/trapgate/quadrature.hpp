#pragma once

#include <complex>
#include <functional>

namespace trapgate {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  // at most 2^max_depth subintervals
  unsigned max_depth = 12;
  // the interval is split into this many panels before adaptive refinement
  int panels = 8;
};

struct QuadratureResult {
  double value;
  double error;
};

// Globally adaptive Gauss-Kronrod (31 point). Throws Errc::quadrature_failure when the
// error estimate exceeds both tolerances.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt = {});

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, const QuadratureOptions& opt = {});

// int_a^b dx int_a^x dy g(x, y), nested adaptive quadrature.
QuadratureResult integrate_triangle(const std::function<double(double, double)>& g, double a,
                                    double b, const QuadratureOptions& opt = {});

// int_a^b int_a^b g(x, y) dx dy
QuadratureResult integrate_square(const std::function<double(double, double)>& g, double a,
                                  double b, const QuadratureOptions& opt = {});

}  // namespace trapgate
