/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ratspec/specfun.hpp"

#include <cmath>

#include "ratspec/detail/bessel_impl.hpp"
#include "ratspec/errors.hpp"

namespace ratspec {

double ln_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("ln_gamma: x must be positive");
  int sign = 1;
  return ::lgamma_r(x, &sign);
}

double pochhammer(double a, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) {
    r *= a + j;
    if (r == 0.0) return 0.0;
  }
  return r;
}

double beta(double a, double b) {
  return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

double hyp2f1(const Hyp2F1Args& args, const Hyp2F1Options& opt) {
  return detail::hyp2f1_impl(args.a, args.b, args.c, args.x, opt);
}

mp::Real hyp2f1(const mp::Real& a, const mp::Real& b, const mp::Real& c, const mp::Real& x,
                const Hyp2F1Options& opt) {
  return detail::hyp2f1_impl(a, b, c, x, opt);
}

namespace {

template <class T>
T shift_a(const T& a, const T& b, const T& c, const T& x, const T& f_prev, const T& f_curr) {
  // (c-a) F(a-1) + (2a - c + (b-a) x) F(a) + a (x-1) F(a+1) = 0
  const T denom = a * (x - 1.0);
  if (denom == 0.0) throw DomainError("hyp2f1_shift_a: a (x - 1) is zero");
  T num = (2.0 * a - c + (b - a) * x) * f_curr + (c - a) * f_prev;
  return -num / denom;
}

}  // namespace

double hyp2f1_shift_a(double a, double b, double c, double x, double f_prev, double f_curr) {
  return shift_a(a, b, c, x, f_prev, f_curr);
}

mp::Real hyp2f1_shift_a(const mp::Real& a, const mp::Real& b, const mp::Real& c,
                        const mp::Real& x, const mp::Real& f_prev, const mp::Real& f_curr) {
  return shift_a(a, b, c, x, f_prev, f_curr);
}

double bessel_k(double mu, double x) { return detail::bessel_k_impl(mu, x); }

mp::Real bessel_k(double mu, const mp::Real& x) {
  return detail::bessel_k_impl(mp::Real(mu, x.prec()), x);
}

mp::Real bessel_k(const mp::Real& mu, const mp::Real& x) { return detail::bessel_k_impl(mu, x); }

std::vector<double> bessel_k_sequence(double mu0, int count, double x) {
  return detail::bessel_k_sequence_impl(mu0, count, x);
}

std::vector<mp::Real> bessel_k_sequence(const mp::Real& mu0, int count, const mp::Real& x) {
  return detail::bessel_k_sequence_impl(mu0, count, x);
}

std::vector<double> gegenbauer_all(int n_max, double lambda, double t) {
  if (!(lambda > -0.5)) throw DomainError("gegenbauer_all: lambda must exceed -1/2");
  std::vector<double> c(static_cast<size_t>(std::max(n_max, 0)) + 1);
  c[0] = 1.0;
  if (n_max == 0) return c;
  if (lambda == 0.0) {
    c[1] = t;
    for (int n = 2; n <= n_max; ++n) c[n] = 2.0 * t * c[n - 1] - c[n - 2];
    return c;
  }
  c[1] = 2.0 * lambda * t;
  for (int n = 2; n <= n_max; ++n) {
    c[n] = (2.0 * t * (n + lambda - 1.0) * c[n - 1] - (n + 2.0 * lambda - 2.0) * c[n - 2]) / n;
  }
  return c;
}

}  // namespace ratspec
