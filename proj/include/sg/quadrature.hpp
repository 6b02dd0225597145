#pragma once

#include "sg/core.hpp"

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace sg::quad {

struct Rule {
  std::vector<double> nodes, weights;  // on [-1, 1]
};

// n-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int n);

template <typename F> auto gl_panel(const F& f, double a, double b, int n = 16) {
  const Rule& r = gauss_legendre(n);
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  decltype(f(a)) s{};
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(m + h * r.nodes[i]);
  return s * h;
}

template <typename T> struct Estimate {
  T value{};
  double error = 0;
};

namespace detail {
template <typename F, typename T>
bool adapt(const F& f, double a, double b, T whole, double tol, int depth, Estimate<T>& acc) {
  const double m = 0.5 * (a + b);
  const T left = gl_panel(f, a, m), right = gl_panel(f, m, b);
  const double err = std::abs(left + right - whole);
  if (err <= tol || (b - a) < 1e-14 * (1 + std::abs(a))) {
    acc.value += left + right;
    acc.error += err;
    return err <= tol;
  }
  if (depth == 0) return false;
  return adapt(f, a, m, left, 0.5 * tol, depth - 1, acc) &&
         adapt(f, m, b, right, 0.5 * tol, depth - 1, acc);
}
}  // namespace detail

// Adaptive bisection with a 16-point Gauss-Legendre panel; breakpoints split the range first.
// Throws NumericalError when the tolerance cannot be met.
template <typename F>
auto adaptive(const F& f, std::vector<double> breaks, double tol, int max_depth = 40) {
  using T = decltype(f(breaks.front()));
  Estimate<T> acc;
  const double share = tol / double(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (b <= a) continue;
    if (!detail::adapt(f, a, b, gl_panel(f, a, b), share, max_depth, acc))
      throw NumericalError("adaptive quadrature did not converge");
  }
  return acc;
}

// Double-exponential (tanh-sinh) rule on [a, b]. The integrand receives the node s and the
// distances s - a and b - s computed without cancellation, so endpoint singularities such as
// ln(b - s) stay accurate.
template <typename F> auto tanh_sinh(const F& f, double a, double b, double tol) {
  using T = decltype(f(a, 0.0, 0.0));
  const double half = 0.5 * (b - a);
  auto sample = [&](double tau) {
    const double sh = std::sinh(tau), ch = std::cosh(tau);
    const double y = 0.5 * pi * sh;
    const double e = std::exp(-2 * std::abs(y));
    // 1 - tanh|y| = 2e/(1+e) and 1 + tanh|y| = 2/(1+e)
    const double small = 2 * e / (1 + e), large = 2 / (1 + e);
    const double w = 0.5 * pi * ch * small * large;  // dtanh(y)/dtau = (pi/2) cosh(tau) sech^2(y)
    const double da = half * (y >= 0 ? large : small);
    const double db = half * (y >= 0 ? small : large);
    const double s = y >= 0 ? b - db : a + da;
    if (da <= 0 || db <= 0) return T{};
    return T(f(s, da, db) * (w * half));
  };
  double h = 1.0;
  const double tau_max = 4.0;
  T sum = sample(0.0);
  for (double tau = h; tau <= tau_max; tau += h) sum += sample(tau) + sample(-tau);
  T prev = sum * h;
  for (int level = 0; level < 12; ++level) {
    h *= 0.5;
    for (double tau = h; tau <= tau_max; tau += 2 * h) sum += sample(tau) + sample(-tau);
    const T cur = sum * h;
    if (level >= 2 && std::abs(cur - prev) <= tol) return Estimate<T>{cur, std::abs(cur - prev)};
    prev = cur;
  }
  throw NumericalError("tanh-sinh quadrature did not converge");
}

}  // namespace sg::quad
