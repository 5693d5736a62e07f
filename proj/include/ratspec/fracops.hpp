/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Fractional Laplacian (-Delta)^s and Fourier transform of MMGFs in closed form.
//
// Both operators act on the finite sums of rational building blocks
// (1+x^2)^{-gamma} and x (1+x^2)^{-gamma} that make up each MMGF. Those sums
// cancel heavily (about 2.5 bits per block), so they are evaluated in MPFR
// arithmetic at a precision chosen from an a-priori cancellation bound and
// raised adaptively when the a-posteriori estimate falls short.

#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "ratspec/mmgf.hpp"

namespace ratspec {

/// 2^{2s} Gamma(s+gamma) Gamma(s+1/2) / (sqrt(pi) Gamma(gamma)).
double a_factor(double s, double gamma);

/// (-Delta)^s (1+x^2)^{-gamma}.
double frac_lap_even_block(double s, double gamma, double x);

/// (-Delta)^s x (1+x^2)^{-gamma}; requires gamma > 1/2.
double frac_lap_odd_block(double s, double gamma, double x);

struct FracOptions {
  /// Largest basis degree accepted.
  int max_degree = 1024;
  /// Non-fatal warning threshold on the estimated relative error.
  double warn_rel_error = 1e-6;
  /// Working precision is raised until the estimated error is below this.
  double target_rel_error = 1e-17;
};

struct FracDiagnostics {
  long precision_bits = 0;   // final working precision
  double bits_lost = 0.0;    // largest observed cancellation, in bits
  double est_rel_error = 0.0;
  int refinements = 0;
  bool accuracy_warning = false;
};

/// (-Delta)^s R_{n,mu}(x) for all n <= spec.n_max at a point.
class FracLapEvaluator {
 public:
  FracLapEvaluator(const BasisSpec& spec, double s, const FracOptions& opt = {});
  ~FracLapEvaluator();
  FracLapEvaluator(FracLapEvaluator&&) noexcept;

  std::vector<double> eval_all(double x, FracDiagnostics* diag = nullptr) const;
  const BasisSpec& spec() const { return spec_; }
  double s() const { return s_; }

 private:
  struct Impl;
  BasisSpec spec_;
  double s_;
  FracOptions opt_;
  std::unique_ptr<Impl> impl_;
};

/// Fourier transform F[R_{n,mu}](xi) = (2 pi)^{-1/2} int R_{n,mu}(x) e^{-i x xi} dx
/// for all n <= spec.n_max. Even n give real values, odd n purely imaginary.
class FourierEvaluator {
 public:
  explicit FourierEvaluator(const BasisSpec& spec, const FracOptions& opt = {});
  ~FourierEvaluator();
  FourierEvaluator(FourierEvaluator&&) noexcept;

  std::vector<std::complex<double>> eval_all(double xi, FracDiagnostics* diag = nullptr) const;
  const BasisSpec& spec() const { return spec_; }

 private:
  struct Impl;
  BasisSpec spec_;
  FracOptions opt_;
  std::unique_ptr<Impl> impl_;
};

double frac_lap_mmgf(const BasisSpec& spec, int n, double s, double x,
                     FracDiagnostics* diag = nullptr, const FracOptions& opt = {});

std::complex<double> fourier_mmgf(const BasisSpec& spec, int n, double xi,
                                  FracDiagnostics* diag = nullptr, const FracOptions& opt = {});

/// Inverse transform; the conjugate of fourier_mmgf.
std::complex<double> inv_fourier_mmgf(const BasisSpec& spec, int n, double x,
                                      FracDiagnostics* diag = nullptr, const FracOptions& opt = {});

enum class Parity { Even, Odd };

struct DecayExponent {
  double exponent;  // |(-Delta)^s R_n(x)| ~ (1+x^2)^{-exponent}
  bool has_log;     // extra ln(1+x^2) factor
};

DecayExponent decay_exponent(double lambda, double s, Parity parity);

}  // namespace ratspec
