/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Scalar special functions on the real line.

#pragma once

#include <vector>

#include "ratspec/detail/hyp2f1_impl.hpp"
#include "ratspec/mp.hpp"

namespace ratspec {

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Rising factorial (a)_k.
double pochhammer(double a, int k);

/// B(a, b) for a, b > 0.
double beta(double a, double b);

struct Hyp2F1Args {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double x = 0.0;
};

/// 2F1(a, b; c; x) for real x < 1 (x = 1 when c - a - b > 0, any x for
/// polynomial cases).
double hyp2f1(const Hyp2F1Args& args, const Hyp2F1Options& opt = {});

/// Same evaluation in MPFR arithmetic; the working precision is that of x.
mp::Real hyp2f1(const mp::Real& a, const mp::Real& b, const mp::Real& c, const mp::Real& x,
                const Hyp2F1Options& opt = {});

/// 2F1(a+1, b; c; x) from F(a-1, ...) and F(a, ...) via the contiguous relation.
double hyp2f1_shift_a(double a, double b, double c, double x, double f_prev, double f_curr);
mp::Real hyp2f1_shift_a(const mp::Real& a, const mp::Real& b, const mp::Real& c,
                        const mp::Real& x, const mp::Real& f_prev, const mp::Real& f_curr);

/// K_mu(x) for x > 0. Even in mu.
double bessel_k(double mu, double x);
mp::Real bessel_k(double mu, const mp::Real& x);
/// MP order, so non-dyadic orders stay exact relative to the working precision.
mp::Real bessel_k(const mp::Real& mu, const mp::Real& x);

/// K_{mu0 + j}(x) for j = 0..count-1.
std::vector<double> bessel_k_sequence(double mu0, int count, double x);
std::vector<mp::Real> bessel_k_sequence(const mp::Real& mu0, int count, const mp::Real& x);

/// C_0^lambda(t) .. C_N^lambda(t); lambda = 0 gives Chebyshev T_n.
std::vector<double> gegenbauer_all(int n_max, double lambda, double t);

}  // namespace ratspec
