#pragma once

#include <array>

namespace trapgate {

// s(t) = sum_n c_n cos(k_n t), k_n = (2n - 1) pi / T for n = 1..4.
// Every term is odd about T/2 and its odd derivatives vanish at 0 and T.
class CosineSeries {
 public:
  static constexpr int terms = 4;
  using Coefficients = std::array<double, terms>;

  CosineSeries() = default;
  CosineSeries(double duration, Coefficients c);

  double duration() const { return T_; }
  const Coefficients& coefficients() const { return c_; }
  double wavenumber(int n) const;  // n = 1..4

  double operator()(double t) const { return derivative(t, 0); }
  double derivative(double t, int order) const;

  CosineSeries scaled(double factor) const;

  // exact integral over [0, T] of the product of two series on the same T
  static double overlap(const CosineSeries& a, const CosineSeries& b);

 private:
  double T_ = 1.0;
  Coefficients c_{};
};

}  // namespace trapgate
