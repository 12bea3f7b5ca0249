#include "trapgate/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "trapgate/errors.hpp"

namespace trapgate {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Piece {
  double a, b, value, error, l1;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece rule(const std::function<double(double)>& f, double a, double b) {
  Piece p{a, b, 0.0, 0.0, 0.0};
  try {
    p.value = GK::integrate(f, a, b, 0, 0.0, &p.error, &p.l1);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Errc::quadrature_failure, e.what());
  }
  return p;
}

// Globally adaptive bisection (largest error first), stopping at the
// requested tolerance or at the round-off floor of the rule.
QuadratureResult panel_sum(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt) {
  const int n = opt.panels > 0 ? opt.panels : 1;
  const double h = (b - a) / n;
  std::priority_queue<Piece> heap;
  double value = 0.0, error = 0.0, l1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == n) ? b : lo + h;
    Piece p = rule(f, lo, hi);
    value += p.value;
    error += p.error;
    l1 += p.l1;
    heap.push(p);
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const std::size_t max_pieces = std::size_t{1} << std::min(opt.max_depth, 20u);
  auto done = [&] {
    return error <= opt.abs_tol || error <= opt.rel_tol * std::abs(value) ||
           error <= 50.0 * eps * l1;
  };
  while (!done() && heap.size() < max_pieces) {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const Piece left = rule(f, worst.a, mid);
    const Piece right = rule(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  if (!std::isfinite(value) || !done()) {
    std::ostringstream msg;
    msg << "error estimate " << error << " on [" << a << ", " << b << "] (value " << value
        << ")";
    throw Error(Errc::quadrature_failure, msg.str());
  }
  return {value, error};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt) {
  if (a == b) return {0.0, 0.0};
  return panel_sum(f, a, b, opt);
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, const QuadratureOptions& opt) {
  const auto re = integrate([&](double t) { return f(t).real(); }, a, b, opt);
  const auto im = integrate([&](double t) { return f(t).imag(); }, a, b, opt);
  return {re.value, im.value};
}

QuadratureResult integrate_triangle(const std::function<double(double, double)>& g, double a,
                                    double b, const QuadratureOptions& opt) {
  QuadratureOptions inner = opt;
  inner.panels = 1;
  double inner_error = 0.0;
  auto outer = [&](double x) {
    const auto r = integrate([&](double y) { return g(x, y); }, a, x, inner);
    inner_error = std::max(inner_error, r.error);
    return r.value;
  };
  auto r = integrate(outer, a, b, opt);
  r.error += inner_error * (b - a);
  return r;
}

QuadratureResult integrate_square(const std::function<double(double, double)>& g, double a,
                                  double b, const QuadratureOptions& opt) {
  QuadratureOptions inner = opt;
  double inner_error = 0.0;
  auto outer = [&](double x) {
    const auto r = integrate([&](double y) { return g(x, y); }, a, b, inner);
    inner_error = std::max(inner_error, r.error);
    return r.value;
  };
  auto r = integrate(outer, a, b, opt);
  r.error += inner_error * (b - a);
  return r;
}

}  // namespace trapgate
