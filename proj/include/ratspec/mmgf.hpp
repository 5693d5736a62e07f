/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Modified mapped Gegenbauer functions (MMGFs) on the real line:
//   R_n^lambda(x) = (1+x^2)^{-(lambda+1)/2} C_n^lambda(x / sqrt(1+x^2)),
// and the scaled family R_{n,mu}(x) = mu^{-1/2} R_n(x/mu).

#pragma once

#include <string>
#include <vector>

namespace ratspec {

/// x = t / sqrt(1 - t^2) for |t| < 1.
double map_t_to_x(double t);

/// t = x / sqrt(1 + x^2).
double map_x_to_t(double x);

struct BasisSpec {
  double lambda = 0.0;
  double scale = 1.0;
  int n_max = 0;

  /// Throws DomainError unless lambda > -1/2, scale > 0 and n_max >= 0.
  void validate() const;
  int size() const { return n_max + 1; }
};

struct SpectralField {
  BasisSpec basis;
  std::vector<double> coeffs;  // length n_max + 1

  void validate() const;
};

/// R_{0,mu}(x) .. R_{N,mu}(x).
std::vector<double> mmgf_eval_all(const BasisSpec& spec, double x);

/// Values and first two x-derivatives of R_{0,mu} .. R_{N,mu}.
struct MmgfDerivs {
  std::vector<double> value, d1, d2;
};
MmgfDerivs mmgf_eval_derivs(const BasisSpec& spec, double x);

/// Squared L2(R) norm of R_n^lambda (also of R_{n,mu}^lambda for any mu).
double norm_gamma(int n, double lambda);

/// Leading factor of the explicit sums: a_m for n = 2m, b_m for n = 2m+1.
/// Both equal 1 for lambda = 0 (Chebyshev normalization).
double mmgf_sum_prefactor(int n, double lambda);

/// Sum_n coeffs[n] R_{n,mu}(x).
double eval_field(const SpectralField& field, double x);

/// JSON form {"lambda": .., "scale": .., "coeffs": [..]}.
std::string field_to_json(const SpectralField& field);
SpectralField field_from_json(const std::string& text);

}  // namespace ratspec
