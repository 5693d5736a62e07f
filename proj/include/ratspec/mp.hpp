/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Thin value-semantic wrapper over an MPFR number.
//
// Every Real carries its own precision; binary operations produce a result
// at the larger of the operand precisions. There is no global default
// precision, so independent threads may use different working precisions.

#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace ratspec::mp {

using Prec = mpfr_prec_t;

class Real {
 public:
  explicit Real(Prec prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(double x, Prec prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(long x, Prec prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }

  Real(const Real& o) { mpfr_init2(v_, o.prec()); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      if (prec() != o.prec()) mpfr_set_prec(v_, o.prec());
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  /// Keeps the current precision.
  Real& operator=(double x) { mpfr_set_d(v_, x, MPFR_RNDN); return *this; }
  ~Real() { mpfr_clear(v_); }

  Prec prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Base-2 exponent of the value (0 for zero).
  long exponent() const { return mpfr_zero_p(v_) ? 0 : mpfr_get_exp(v_); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  Real& operator+=(const Real& o) { grow(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { grow(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { grow(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { grow(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator+=(double x) { mpfr_add_d(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator-=(double x) { mpfr_sub_d(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator*=(double x) { mpfr_mul_d(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator/=(double x) { mpfr_div_d(v_, v_, x, MPFR_RNDN); return *this; }

  /// this += a * b, one rounding.
  void add_product(const Real& a, const Real& b) { mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN); }

  Real operator-() const { Real r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

 private:
  void grow(const Real& o) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
  }
  mpfr_t v_;
};

inline Real operator+(Real a, const Real& b) { a += b; return a; }
inline Real operator-(Real a, const Real& b) { a -= b; return a; }
inline Real operator*(Real a, const Real& b) { a *= b; return a; }
inline Real operator/(Real a, const Real& b) { a /= b; return a; }
inline Real operator+(Real a, double b) { a += b; return a; }
inline Real operator-(Real a, double b) { a -= b; return a; }
inline Real operator*(Real a, double b) { a *= b; return a; }
inline Real operator/(Real a, double b) { a /= b; return a; }
inline Real operator+(double a, Real b) { b += a; return b; }
inline Real operator*(double a, Real b) { b *= a; return b; }
inline Real operator-(double a, const Real& b) {
  Real r(b.prec());
  mpfr_d_sub(r.raw(), a, b.raw(), MPFR_RNDN);
  return r;
}
inline Real operator/(double a, const Real& b) {
  Real r(b.prec());
  mpfr_d_div(r.raw(), a, b.raw(), MPFR_RNDN);
  return r;
}

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.raw(), b.raw()); }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.raw(), b.raw()); }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.raw(), b.raw()); }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.raw(), b.raw()); }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()); }
inline bool operator!=(const Real& a, const Real& b) { return !(a == b); }
inline bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.raw(), b) == 0; }
inline bool operator!=(const Real& a, double b) { return mpfr_cmp_d(a.raw(), b) != 0; }
inline bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.raw(), b) < 0; }
inline bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.raw(), b) > 0; }
inline bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.raw(), b) <= 0; }
inline bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.raw(), b) >= 0; }

namespace detail {
template <int (*F)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)>
inline Real unary(const Real& x) {
  Real r(x.prec());
  F(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline Real abs(const Real& x) { return detail::unary<mpfr_abs>(x); }
inline Real sqrt(const Real& x) { return detail::unary<mpfr_sqrt>(x); }
inline Real exp(const Real& x) { return detail::unary<mpfr_exp>(x); }
inline Real log(const Real& x) { return detail::unary<mpfr_log>(x); }
inline Real log1p(const Real& x) { return detail::unary<mpfr_log1p>(x); }
inline Real cosh(const Real& x) { return detail::unary<mpfr_cosh>(x); }
inline Real sinh(const Real& x) { return detail::unary<mpfr_sinh>(x); }
inline Real tgamma(const Real& x) { return detail::unary<mpfr_gamma>(x); }
inline Real digamma(const Real& x) { return detail::unary<mpfr_digamma>(x); }
inline Real lgamma(const Real& x) {
  Real r(x.prec());
  int sign = 0;
  mpfr_lgamma(r.raw(), &sign, x.raw(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& x, const Real& y) {
  Real r(std::max(x.prec(), y.prec()));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& x, double y) { return pow(x, Real(y, x.prec())); }
inline Real pi(Prec prec) {
  Real r(prec);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

}  // namespace ratspec::mp
