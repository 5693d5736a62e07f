/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ratspec/mmgf.hpp"

#include <cmath>

#include "json.hpp"
#include "ratspec/detail/scalar.hpp"
#include "ratspec/errors.hpp"
#include "ratspec/specfun.hpp"

namespace ratspec {

double map_t_to_x(double t) {
  if (!(std::abs(t) < 1.0)) throw DomainError("map_t_to_x: |t| must be < 1");
  return t / std::sqrt((1.0 - t) * (1.0 + t));
}

double map_x_to_t(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : -1.0;
  // x / sqrt(1 + x^2) without overflow for huge |x|.
  if (std::abs(x) > 1e150) return std::copysign(1.0 / std::sqrt(1.0 + 1.0 / (x * x)), x);
  return x / std::sqrt(1.0 + x * x);
}

void BasisSpec::validate() const {
  if (!(lambda > -0.5)) throw DomainError("BasisSpec: lambda must exceed -1/2");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("BasisSpec: scale must be positive");
  if (n_max < 0) throw DomainError("BasisSpec: n_max must be non-negative");
}

void SpectralField::validate() const {
  basis.validate();
  if (coeffs.size() != static_cast<size_t>(basis.n_max) + 1) {
    throw DomainError("SpectralField: coeffs length must be n_max + 1");
  }
}

std::vector<double> mmgf_eval_all(const BasisSpec& spec, double x) {
  spec.validate();
  const double lam = spec.lambda;
  const double y = x / spec.scale;
  const double q = 1.0 + y * y;
  const double t = map_x_to_t(y);
  const double r0 = std::pow(q, -(lam + 1.0) / 2.0) / std::sqrt(spec.scale);
  // Same recurrence as the Gegenbauer polynomials, scaled by r0.
  std::vector<double> r = gegenbauer_all(spec.n_max, lam, t);
  for (double& v : r) v *= r0;
  return r;
}

MmgfDerivs mmgf_eval_derivs(const BasisSpec& spec, double x) {
  spec.validate();
  const double lam = spec.lambda;
  const double mu = spec.scale;
  const double y = x / mu;
  const double q = 1.0 + y * y;
  const double t = map_x_to_t(y);
  const int n_max = spec.n_max;

  // C_n, C_n', C_n'' in t by differentiating the three-term recurrence.
  std::vector<double> c(n_max + 1), c1(n_max + 1), c2(n_max + 1);
  c[0] = 1.0;
  c1[0] = c2[0] = 0.0;
  if (n_max >= 1) {
    const double k = lam == 0.0 ? 1.0 : 2.0 * lam;
    c[1] = k * t;
    c1[1] = k;
    c2[1] = 0.0;
  }
  for (int n = 2; n <= n_max; ++n) {
    double alpha, beta_, denom;
    if (lam == 0.0) {
      alpha = 1.0;  // T_n = 2t T_{n-1} - T_{n-2}
      beta_ = 1.0;
      denom = 1.0;
    } else {
      alpha = n + lam - 1.0;
      beta_ = n + 2.0 * lam - 2.0;
      denom = n;
    }
    c[n] = (2.0 * alpha * t * c[n - 1] - beta_ * c[n - 2]) / denom;
    c1[n] = (2.0 * alpha * (c[n - 1] + t * c1[n - 1]) - beta_ * c1[n - 2]) / denom;
    c2[n] = (2.0 * alpha * (2.0 * c1[n - 1] + t * c2[n - 1]) - beta_ * c2[n - 2]) / denom;
  }

  // Envelope S(y) = q^{-(lam+1)/2} and the map t(y).
  const double p = (lam + 1.0) / 2.0;
  const double s0 = std::pow(q, -p);
  const double s1 = -2.0 * p * y * s0 / q;
  const double s2 = -2.0 * p * s0 / q + 4.0 * p * (p + 1.0) * y * y * s0 / (q * q);
  const double t1 = std::pow(q, -1.5);
  const double t2 = -3.0 * y * t1 / q;

  const double f0 = 1.0 / std::sqrt(mu);
  const double f1 = f0 / mu;
  const double f2 = f1 / mu;
  MmgfDerivs out;
  out.value.resize(n_max + 1);
  out.d1.resize(n_max + 1);
  out.d2.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    out.value[n] = f0 * s0 * c[n];
    out.d1[n] = f1 * (s1 * c[n] + s0 * c1[n] * t1);
    out.d2[n] = f2 * (s2 * c[n] + 2.0 * s1 * c1[n] * t1 + s0 * (c2[n] * t1 * t1 + c1[n] * t2));
  }
  return out;
}

double norm_gamma(int n, double lambda) {
  if (n < 0) throw DomainError("norm_gamma: n must be non-negative");
  if (!(lambda > -0.5)) throw DomainError("norm_gamma: lambda must exceed -1/2");
  if (lambda == 0.0) return n == 0 ? M_PI : M_PI / 2.0;
  auto [lg_num, s_num] = detail::lgamma_signed(n + 2.0 * lambda);
  auto [lg_l, s_l] = detail::lgamma_signed(lambda);
  (void)s_l;
  const double v = std::exp(std::log(M_PI) + (1.0 - 2.0 * lambda) * std::log(2.0) + lg_num -
                            std::lgamma(n + 1.0) - 2.0 * lg_l);
  return s_num * v / (n + lambda);
}

double mmgf_sum_prefactor(int n, double lambda) {
  if (lambda == 0.0) return 1.0;
  const int m = n / 2;
  if (n % 2 == 0) {
    return pochhammer(lambda, m) / std::tgamma(m + 1.0) * pochhammer(lambda + 0.5, m) /
           pochhammer(0.5, m);
  }
  return 2.0 * lambda * pochhammer(lambda + 1.0, m) / std::tgamma(m + 1.0) *
         pochhammer(lambda + 0.5, m) / pochhammer(1.5, m);
}

double eval_field(const SpectralField& field, double x) {
  field.validate();
  const std::vector<double> r = mmgf_eval_all(field.basis, x);
  detail::Accumulator<double> acc(0.0);
  for (size_t n = 0; n < r.size(); ++n) acc.add(field.coeffs[n] * r[n]);
  return acc.value();
}

std::string field_to_json(const SpectralField& field) {
  field.validate();
  nlohmann::json j;
  j["lambda"] = field.basis.lambda;
  j["scale"] = field.basis.scale;
  j["coeffs"] = field.coeffs;
  return j.dump(2);
}

SpectralField field_from_json(const std::string& text) {
  SpectralField f;
  try {
    const auto j = nlohmann::json::parse(text);
    f.basis.lambda = j.at("lambda").get<double>();
    f.basis.scale = j.at("scale").get<double>();
    f.coeffs = j.at("coeffs").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("SpectralField JSON: ") + e.what());
  }
  if (f.coeffs.empty()) throw ConfigError("SpectralField JSON: coeffs must be non-empty");
  f.basis.n_max = static_cast<int>(f.coeffs.size()) - 1;
  try {
    f.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return f;
}

}  // namespace ratspec
