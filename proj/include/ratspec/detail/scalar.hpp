/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Scalar helpers shared by code templated over `double` and `mp::Real`.

#pragma once

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <limits>
#include <utility>

#include "ratspec/mp.hpp"

namespace ratspec::detail {

inline double constant(double /*like*/, double v) { return v; }
inline mp::Real constant(const mp::Real& like, double v) { return mp::Real(v, like.prec()); }

inline double to_double(double x) { return x; }
inline double to_double(const mp::Real& x) { return x.to_double(); }

/// Relative tolerance matching the working precision of `like`.
inline double epsilon_of(double /*like*/) { return std::numeric_limits<double>::epsilon(); }
inline double epsilon_of(const mp::Real& like) { return std::ldexp(1.0, -static_cast<int>(like.prec())); }

inline double pi_of(double /*like*/) { return 3.14159265358979323846; }
inline mp::Real pi_of(const mp::Real& like) { return mp::pi(like.prec()); }

inline double digamma(double x) { return boost::math::digamma(x); }
using mp::digamma;

/// ln|Gamma(x)| together with the sign of Gamma(x).
inline std::pair<double, int> lgamma_signed(double x) {
  int sign = 1;
  double v = ::lgamma_r(x, &sign);
  return {v, sign};
}
inline std::pair<mp::Real, int> lgamma_signed(const mp::Real& x) {
  mp::Real r(x.prec());
  int sign = 1;
  mpfr_lgamma(r.raw(), &sign, x.raw(), MPFR_RNDN);
  return {std::move(r), sign};
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }
inline bool is_nonpositive_integer(const mp::Real& x) {
  return x <= 0.0 && mpfr_integer_p(x.raw()) != 0;
}

/// Gamma(x) evaluated through logs; 1/Gamma at poles is handled by rgamma.
template <class T>
T gamma_fn(const T& x) {
  using std::exp;
  using mp::exp;
  auto [lg, sign] = lgamma_signed(x);
  T r = exp(lg);
  if (sign < 0) r = -r;
  return r;
}

/// 1/Gamma(x), exactly zero at the poles.
template <class T>
T rgamma(const T& x) {
  using std::exp;
  using mp::exp;
  if (is_nonpositive_integer(x)) return constant(x, 0.0);
  auto [lg, sign] = lgamma_signed(x);
  T r = exp(-lg);
  if (sign < 0) r = -r;
  return r;
}

/// Kahan-compensated accumulator for double; plain accumulation for MP
/// numbers, which carry their own guard bits.
template <class T>
class Accumulator {
 public:
  explicit Accumulator(const T& zero) : sum_(zero) {}
  void add(const T& x) { sum_ += x; }
  const T& value() const { return sum_; }

 private:
  T sum_;
};

template <>
class Accumulator<double> {
 public:
  explicit Accumulator(double zero) : sum_(zero) {}
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_;
  double comp_ = 0.0;
};

}  // namespace ratspec::detail
