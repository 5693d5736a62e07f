/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Real-line Gauss hypergeometric function, templated over the scalar type so
// the same code runs in double and in MPFR arithmetic.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>

#include "ratspec/detail/scalar.hpp"
#include "ratspec/errors.hpp"

namespace ratspec {

enum class Hyp2F1Route { Auto, Series, Pfaff };

struct Hyp2F1Options {
  int max_terms = 10000;
  /// Relative term cutoff. Ignored (replaced by 2^-prec) for MP arguments.
  double tol = 1e-17;
  Hyp2F1Route route = Hyp2F1Route::Auto;
};

}  // namespace ratspec

namespace ratspec::detail {

template <class T>
double term_tol(const T& like, const Hyp2F1Options& opt) {
  if constexpr (std::is_same_v<T, double>) {
    return opt.tol;
  } else {
    return epsilon_of(like);
  }
}

/// Returns -a as a non-negative integer when a is a non-positive integer.
template <class T>
std::optional<long> poly_degree(const T& a) {
  if (!is_nonpositive_integer(a)) return std::nullopt;
  return -std::lround(to_double(a));
}

template <class T>
T hyp_poly(const T& a, const T& b, const T& c, const T& x, long n) {
  T term = constant(x, 1.0);
  Accumulator<T> sum(constant(x, 0.0));
  sum.add(term);
  for (long k = 0; k < n; ++k) {
    term *= (a + static_cast<double>(k)) * (b + static_cast<double>(k)) * x /
            ((c + static_cast<double>(k)) * static_cast<double>(k + 1));
    sum.add(term);
  }
  return sum.value();
}

template <class T>
T hyp_series(const T& a, const T& b, const T& c, const T& x, const Hyp2F1Options& opt) {
  using std::abs;
  using mp::abs;
  const double tol = term_tol(x, opt);
  T term = constant(x, 1.0);
  Accumulator<T> sum(constant(x, 0.0));
  sum.add(term);
  int small_run = 0;
  // Largest term seen; when the sum cancels to (near) zero the attainable
  // accuracy is relative to it rather than to the sum.
  double peak = 1.0;
  for (int k = 0; k < opt.max_terms; ++k) {
    const double dk = static_cast<double>(k);
    term *= (a + dk) * (b + dk) * x / ((c + dk) * (dk + 1.0));
    sum.add(term);
    const double td = std::abs(to_double(term));
    peak = std::max(peak, td);
    if (abs(term) <= tol * abs(sum.value()) || td <= tol * 1e-3 * peak) {
      // Two consecutive small terms guard against a transient dip near a+k ~ 0.
      if (++small_run >= 2) return sum.value();
    } else {
      small_run = 0;
    }
  }
  throw ConvergenceError("hyp2f1: series did not converge within " +
                         std::to_string(opt.max_terms) + " terms");
}

/// Series of the logarithmic connection formulas. Evaluates
///   sum_n p_n w^n [ln w - psi(n+1) - psi(n+m+1) + psi(a0+n) + psi(b0+n)]
/// with p_n = (a0)_n (b0)_n / (n! (n+m)!).
template <class T>
T hyp_log_series(const T& a0, const T& b0, long m, const T& w, const Hyp2F1Options& opt) {
  using std::abs;
  using std::log;
  using mp::abs;
  using mp::log;
  const double tol = term_tol(w, opt);
  const T lw = log(w);
  T psi_n1 = digamma(constant(w, 1.0));
  T psi_nm1 = digamma(constant(w, static_cast<double>(m + 1)));
  T psi_a = digamma(a0);
  T psi_b = digamma(b0);
  // p_0 = 1/m!
  T p = constant(w, 1.0);
  for (long j = 2; j <= m; ++j) p /= static_cast<double>(j);
  Accumulator<T> sum(constant(w, 0.0));
  int small_run = 0;
  for (int n = 0; n < opt.max_terms; ++n) {
    T contrib = p * (lw - psi_n1 - psi_nm1 + psi_a + psi_b);
    sum.add(contrib);
    if (n > 0 && abs(contrib) <= tol * abs(sum.value())) {
      if (++small_run >= 2) return sum.value();
    } else {
      small_run = 0;
    }
    const double dn = static_cast<double>(n);
    p *= (a0 + dn) * (b0 + dn) * w / ((dn + 1.0) * (dn + static_cast<double>(m) + 1.0));
    psi_n1 += 1.0 / (dn + 1.0);
    psi_nm1 += 1.0 / (dn + static_cast<double>(m) + 1.0);
    psi_a += 1.0 / (a0 + dn);
    psi_b += 1.0 / (b0 + dn);
  }
  throw ConvergenceError("hyp2f1: logarithmic connection series did not converge");
}

/// Finite sum  sum_{n<m} (p)_n (q)_n / (n! (1-m)_n) w^n.
template <class T>
T hyp_finite_head(const T& p, const T& q, long m, const T& w) {
  T term = constant(w, 1.0);
  T sum = term;
  for (long n = 0; n + 1 < m; ++n) {
    const double dn = static_cast<double>(n);
    term *= (p + dn) * (q + dn) * w / ((dn + 1.0) * (1.0 - static_cast<double>(m) + dn));
    sum += term;
  }
  return sum;
}

/// Continuation around z = 1, given w = 1 - z in (0, 1).
template <class T>
T hyp_connection(const T& a, const T& b, const T& c, const T& w, const Hyp2F1Options& opt) {
  using std::pow;
  using mp::pow;
  const T s = c - a - b;
  const double sd = to_double(s);
  const long m = std::lround(sd);
  const bool degenerate =
      std::abs(sd - static_cast<double>(m)) < 1e-12 * std::max(1.0, std::abs(sd));
  if (!degenerate) {
    const T g1 = gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b);
    const T g2 = gamma_fn(c) * gamma_fn(-s) * rgamma(a) * rgamma(b);
    T r = g1 * hyp_series(a, b, constant(w, 1.0) - s, w, opt);
    r += g2 * pow(w, s) * hyp_series(c - a, c - b, s + 1.0, w, opt);
    return r;
  }
  if (m == 0) {
    // c = a + b
    const T pref = gamma_fn(c) * rgamma(a) * rgamma(b);
    return -pref * hyp_log_series(a, b, 0, w, opt);
  }
  if (m > 0) {
    // c = a + b + m
    const double dm = static_cast<double>(m);
    T head = gamma_fn(constant(w, dm)) * gamma_fn(c) * rgamma(a + dm) * rgamma(b + dm) *
             hyp_finite_head(a, b, m, w);
    T sign_w = pow(-w, static_cast<double>(m));
    T tail = gamma_fn(c) * rgamma(a) * rgamma(b) * sign_w *
             hyp_log_series(a + dm, b + dm, m, w, opt);
    return head - tail;
  }
  // c = a + b - m'
  const long mp_ = -m;
  const double dm = static_cast<double>(mp_);
  T head = gamma_fn(constant(w, dm)) * gamma_fn(c) * rgamma(a) * rgamma(b) *
           pow(w, -dm) * hyp_finite_head(a - dm, b - dm, mp_, w);
  T tail = gamma_fn(c) * rgamma(a - dm) * rgamma(b - dm) *
           hyp_log_series(a, b, mp_, w, opt);
  if (mp_ % 2 == 1) tail = -tail;
  return head - tail;
}

/// Evaluation for 0 <= z < 1; w = 1 - z is passed separately so callers that
/// know it more accurately than 1 - z (the Pfaff image) can supply it.
template <class T>
T hyp_unit_interval(const T& a, const T& b, const T& c, const T& z, const T& w,
                    const Hyp2F1Options& opt) {
  if (z <= 0.6 || opt.route != Hyp2F1Route::Auto) return hyp_series(a, b, c, z, opt);
  return hyp_connection(a, b, c, w, opt);
}

template <class T>
T hyp2f1_impl(const T& a, const T& b, const T& c, const T& z, const Hyp2F1Options& opt) {
  using std::pow;
  using mp::pow;
  if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c must not be 0 or a negative integer");
  if (auto n = poly_degree(a)) return hyp_poly(a, b, c, z, *n);
  if (auto n = poly_degree(b)) return hyp_poly(b, a, c, z, *n);
  if (z == 0.0) return constant(z, 1.0);
  if (z >= 1.0) {
    const T s = c - a - b;
    if (z == 1.0 && s > 0.0) {
      return gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b);
    }
    throw DomainError("hyp2f1: argument outside the region of convergence");
  }
  const bool use_pfaff = opt.route == Hyp2F1Route::Pfaff ||
                         (opt.route == Hyp2F1Route::Auto && z < -0.5);
  if (opt.route == Hyp2F1Route::Series && z <= -1.0) {
    throw DomainError("hyp2f1: series route requires |x| < 1");
  }
  if (!use_pfaff) return hyp_unit_interval(a, b, c, z, constant(z, 1.0) - z, opt);
  // Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1)), with the mapped argument in [0, 1).
  if (z > 0.0) throw DomainError("hyp2f1: Pfaff route requires x <= 0");
  const T one_minus = constant(z, 1.0) - z;
  const T y = z / (z - 1.0);
  const T w = constant(z, 1.0) / one_minus;
  const T cb = c - b;
  auto inner = [&]() -> T {
    if (auto n = poly_degree(cb)) return hyp_poly(cb, a, c, y, *n);
    Hyp2F1Options inner_opt = opt;
    inner_opt.route = opt.route == Hyp2F1Route::Pfaff ? Hyp2F1Route::Series : Hyp2F1Route::Auto;
    return hyp_unit_interval(a, cb, c, y, w, inner_opt);
  }();
  return pow(one_minus, -a) * inner;
}

}  // namespace ratspec::detail
