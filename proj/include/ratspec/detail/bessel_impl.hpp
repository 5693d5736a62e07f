/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Modified Bessel function of the second kind, templated over the scalar type.
//
// General orders use K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt with the
// trapezoid rule, which converges geometrically for this analytic, doubly
// exponentially decaying integrand. The integrand is scaled by its peak value
// so that large and tiny results are handled in log space.

#pragma once

#include <cmath>
#include <vector>

#include "ratspec/detail/scalar.hpp"
#include "ratspec/errors.hpp"

namespace ratspec::detail {

/// log of the integrand, computed in double; used for scaling and range only.
inline double bessel_log_integrand(double nu, double x, double t) {
  const double nt = nu * t;
  return -x * std::cosh(t) + nt + std::log1p(std::exp(-2.0 * nt)) - std::log(2.0);
}

inline bool is_half_integer(double nu) {
  const double f = nu - std::floor(nu);
  return f == 0.5;
}

template <class T>
T bessel_k_half_integer(double nu, const T& x) {
  // nu is n + 1/2 with n small enough to be exact in double.
  using std::exp;
  using std::sqrt;
  using mp::exp;
  using mp::sqrt;
  T k_prev = sqrt(pi_of(x) / (2.0 * x)) * exp(-x);  // K_{1/2}
  if (nu == 0.5) return k_prev;
  T k_curr = k_prev * (1.0 + 1.0 / x);  // K_{3/2}
  for (double v = 1.5; v < nu; v += 1.0) {
    T next = k_prev + (2.0 * v) * k_curr / x;
    k_prev = std::move(k_curr);
    k_curr = std::move(next);
  }
  return k_curr;
}

template <class T>
T bessel_k_integral(const T& nu_exact, const T& x) {
  using std::abs;
  using std::cosh;
  using std::exp;
  using std::log1p;
  using mp::abs;
  using mp::cosh;
  using mp::exp;
  using mp::log1p;
  const double nu = to_double(nu_exact);
  const double xd = to_double(x);
  const double eps = epsilon_of(x);
  const double t0 = nu > 0.0 ? std::asinh(nu / xd) : 0.0;
  const double gscale =
      std::max(bessel_log_integrand(nu, xd, 0.0), bessel_log_integrand(nu, xd, t0));
  // Truncate where the scaled integrand drops below the working precision.
  const double cutoff = std::log(eps) - 10.0;
  double t_end = t0 + 0.5;
  while (bessel_log_integrand(nu, xd, t_end) - gscale > cutoff) t_end += 0.5;

  const T ln2 = log1p(constant(x, 1.0));
  auto f = [&](double t) -> T {
    const T tt = constant(x, t);
    const T nt = tt * nu_exact;
    T g = -x * cosh(tt) + nt + log1p(exp(-2.0 * nt)) - ln2;
    g -= gscale;
    return exp(g);
  };

  int n = 8;
  double h = t_end / n;
  Accumulator<T> acc(constant(x, 0.0));
  acc.add(f(0.0) * 0.5);
  for (int j = 1; j < n; ++j) acc.add(f(j * h));
  T sum = acc.value();
  T est = sum * h;
  const double tol = std::max(eps * 64.0, 1e-15);
  for (int level = 0; level < 24; ++level) {
    Accumulator<T> odd(constant(x, 0.0));
    for (int j = 1; j < 2 * n; j += 2) odd.add(f(j * h * 0.5));
    sum += odd.value();
    n *= 2;
    h *= 0.5;
    T next = sum * h;
    const bool done = abs(next - est) <= tol * abs(next);
    est = std::move(next);
    if (done && level >= 1) {
      if constexpr (std::is_same_v<T, double>) {
        if (gscale + std::log(est) > 709.0) throw OverflowError("bessel_k: result overflows double");
      }
      return est * exp(constant(x, gscale));
    }
  }
  throw ConvergenceError("bessel_k: trapezoid rule did not converge");
}

template <class T>
T bessel_k_impl(const T& nu_in, const T& x) {
  using std::abs;
  using mp::abs;
  if (!(x > 0.0)) throw DomainError("bessel_k: x must be positive");
  const T nu_exact = abs(nu_in);
  const double nu = to_double(nu_exact);
  if (is_half_integer(nu) && nu_exact == constant(x, nu)) {
    T r = bessel_k_half_integer(nu, x);
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(r)) throw OverflowError("bessel_k: result overflows double");
    }
    return r;
  }
  return bessel_k_integral(nu_exact, x);
}

/// K_{nu0}(x), K_{nu0+1}(x), ..., count values, by the upward recurrence
/// K_{v+1} = K_{v-1} + (2v/x) K_v, which is stable in this direction.
template <class T>
std::vector<T> bessel_k_sequence_impl(const T& nu0, int count, const T& x) {
  std::vector<T> out;
  if (count <= 0) return out;
  out.reserve(static_cast<size_t>(count));
  out.push_back(bessel_k_impl(nu0, x));
  if (count == 1) return out;
  out.push_back(bessel_k_impl(T(nu0 + 1.0), x));
  for (int j = 2; j < count; ++j) {
    const T v = nu0 + static_cast<double>(j - 1);
    out.push_back(out[j - 2] + (2.0 * v) * out[j - 1] / x);
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(out.back())) throw OverflowError("bessel_k: sequence overflows double");
    }
  }
  return out;
}

}  // namespace ratspec::detail
