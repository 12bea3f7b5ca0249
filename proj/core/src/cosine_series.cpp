#include "trapgate/cosine_series.hpp"

#include <cmath>

#include "trapgate/errors.hpp"
#include "trapgate/units.hpp"

namespace trapgate {

CosineSeries::CosineSeries(double duration, Coefficients c) : T_(duration), c_(c) {
  if (!(duration > 0.0)) throw Error(Errc::invalid_duration, "series duration must be positive");
}

double CosineSeries::wavenumber(int n) const { return (2 * n - 1) * pi / T_; }

double CosineSeries::derivative(double t, int order) const {
  double s = 0.0;
  for (int n = 1; n <= terms; ++n) {
    const double k = wavenumber(n);
    const double x = k * t;
    double v = 0.0;
    switch (order & 3) {
      case 0: v = std::cos(x); break;
      case 1: v = -std::sin(x); break;
      case 2: v = -std::cos(x); break;
      default: v = std::sin(x); break;
    }
    s += c_[n - 1] * std::pow(k, order) * v;
  }
  return s;
}

CosineSeries CosineSeries::scaled(double factor) const {
  Coefficients c = c_;
  for (double& v : c) v *= factor;
  return {T_, c};
}

double CosineSeries::overlap(const CosineSeries& a, const CosineSeries& b) {
  if (a.T_ != b.T_) throw Error(Errc::invalid_argument, "series durations differ");
  double s = 0.0;
  for (int n = 0; n < terms; ++n) s += a.c_[n] * b.c_[n];
  return 0.5 * a.T_ * s;
}

}  // namespace trapgate
