/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ratspec/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ratspec/detail/block_table.hpp"
#include "ratspec/errors.hpp"
#include "ratspec/mp.hpp"
#include "ratspec/specfun.hpp"

namespace ratspec {

using mp::Real;

double a_factor(double s, double gamma) {
  if (!(s > 0.0) || !(gamma > 0.0)) throw DomainError("a_factor: s and gamma must be positive");
  const double lg = 2.0 * s * std::log(2.0) + std::lgamma(s + gamma) + std::lgamma(s + 0.5) -
                    0.5 * std::log(M_PI) - std::lgamma(gamma);
  if (lg > 709.0) throw OverflowError("a_factor: result overflows double");
  return std::exp(lg);
}

double frac_lap_even_block(double s, double gamma, double x) {
  if (!(s > 0.0) || !(gamma > 0.0)) throw DomainError("frac_lap_even_block: s, gamma must be positive");
  // A 2F1(s+gamma, s+1/2; 1/2; -x^2); the Pfaff image of this is the
  // (1+x^2)^{-(s+gamma)} 2F1(-s, s+gamma; 1/2; x^2/(1+x^2)) form.
  return a_factor(s, gamma) * hyp2f1({s + gamma, s + 0.5, 0.5, -x * x});
}

double frac_lap_odd_block(double s, double gamma, double x) {
  if (!(s > 0.0)) throw DomainError("frac_lap_odd_block: s must be positive");
  if (!(gamma > 0.5)) throw DomainError("frac_lap_odd_block: gamma must exceed 1/2");
  if (x == 0.0) return 0.0;
  return (2.0 * s + 1.0) * a_factor(s, gamma) * x * hyp2f1({s + gamma, s + 1.5, 1.5, -x * x});
}

namespace {

using detail::BlockTable;
using detail::build_table;
using detail::cancellation_bits;
using detail::kGuardBits;
using detail::round_prec;

struct ParityResult {
  std::vector<Real> values;
  std::vector<double> err;    // estimated absolute error per m
  std::vector<double> scale;  // floor used for relative error per m
};

/// Sum rows of the table against block values B_j.
/// `noise` is an absolute error bound on each B_j (per unit coefficient).
ParityResult combine(const BlockTable& table, const std::vector<Real>& blocks,
                     const std::vector<double>& noise, mp::Prec prec) {
  ParityResult r;
  const int m_max = static_cast<int>(table.rows.size()) - 1;
  std::vector<double> babs(blocks.size());
  double bmax = 0.0;
  for (size_t j = 0; j < blocks.size(); ++j) babs[j] = std::abs(blocks[j].to_double());
  const double ulp = std::ldexp(1.0, -static_cast<int>(prec));
  for (int m = 0; m <= m_max; ++m) {
    const auto& row = table.rows[m];
    Real sum(prec);
    double abs_sum = 0.0, noise_sum = 0.0;
    bmax = std::max(bmax, babs[m]);
    for (int j = 0; j <= m; ++j) {
      sum.add_product(row[j], blocks[j]);
      const double cj = std::abs(row[j].to_double());
      abs_sum += cj * babs[j];
      noise_sum += cj * noise[j];
    }
    r.values.push_back(sum);
    r.err.push_back(ulp * (4.0 * (m + 1) * abs_sum) + noise_sum);
    r.scale.push_back(std::ldexp(std::abs(row[0].to_double()) * bmax, -40));
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fractional Laplacian

struct FracLapEvaluator::Impl {
  double lambda;
  double s;
  int m_even;
  int m_odd;
  mp::Prec base_prec;
  BlockTable even, odd;
};

FracLapEvaluator::FracLapEvaluator(const BasisSpec& spec, double s, const FracOptions& opt)
    : spec_(spec), s_(s), opt_(opt) {
  spec.validate();
  if (!(s > 0.0)) throw DomainError("fractional order s must be positive");
  if (spec.n_max > opt.max_degree) {
    throw DomainError("basis degree " + std::to_string(spec.n_max) +
                      " exceeds the configured maximum " + std::to_string(opt.max_degree));
  }
  impl_ = std::make_unique<Impl>();
  impl_->lambda = spec.lambda;
  impl_->s = s;
  impl_->m_even = spec.n_max / 2;
  impl_->m_odd = spec.n_max >= 1 ? (spec.n_max - 1) / 2 : -1;
  const double lam = spec.lambda;
  // Blocks grow like A_{s}^{gamma_j} ~ gamma_j^{2s}.
  auto grow_even = [&](int j) { return (s + (lam + 1) / 2 + j) / ((lam + 1) / 2 + j); };
  auto grow_odd = [&](int j) { return (s + lam / 2 + 1 + j) / (lam / 2 + 1 + j); };
  const double bits = std::max(cancellation_bits(lam, false, impl_->m_even, grow_even),
                               cancellation_bits(lam, true, impl_->m_odd, grow_odd));
  impl_->base_prec = round_prec(bits + 53 + kGuardBits);
  impl_->even = build_table(lam, false, impl_->m_even, impl_->base_prec);
  impl_->odd = build_table(lam, true, impl_->m_odd, impl_->base_prec);
}

FracLapEvaluator::~FracLapEvaluator() = default;
FracLapEvaluator::FracLapEvaluator(FracLapEvaluator&&) noexcept = default;

namespace {

/// Values (-Delta)^s of the even or odd building blocks at y for j = 0..m_max,
/// together with an absolute noise bound per block.
void frac_blocks(double lambda, double s_d, bool odd, int m_max, const Real& y, mp::Prec prec,
                 std::vector<Real>& blocks, std::vector<double>& noise) {
  blocks.clear();
  noise.clear();
  if (m_max < 0) return;
  const Real s(s_d, prec);
  const Real lam(lambda, prec);
  const Real gamma0 = odd ? lam * 0.5 + 1.0 : (lam + 1.0) * 0.5;
  const double c_d = odd ? 1.5 : 0.5;
  const Real c(c_d, prec);
  const Real y2 = y * y;
  const Real q = y2 + 1.0;
  const Real z = y2 / q;
  const Real zm1 = -(1.0 / q);
  const Real minus_s = -s;

  // A_0 = 2^{2s} Gamma(s+gamma0) Gamma(s+1/2) / (sqrt(pi) Gamma(gamma0))
  Real a = mp::exp(s * 2.0 * mp::log(Real(2.0, prec)) + mp::lgamma(s + gamma0) +
                   mp::lgamma(s + 0.5) - mp::lgamma(gamma0)) /
           mp::sqrt(mp::pi(prec));
  if (odd) a *= s * 2.0 + 1.0;
  if (odd) a *= y;

  // G_j = 2F1(s+gamma_j, s+c; c; -y^2) = q^{-(s+gamma_j)} F_j with
  // F_j = 2F1(s+gamma_j, -s; c; z).
  Real sg = s + gamma0;
  const Real p0 = mp::pow(q, -sg);
  const Real g0 = hyp2f1(sg, s + c_d, c, -y2);
  Real f_prev = g0 / p0;
  Real f_curr(prec);
  if (m_max >= 1) {
    const Real g1 = hyp2f1(sg + 1.0, s + c_d, c, -y2);
    f_curr = g1 / (p0 / q);
  }
  const double fscale = std::max({1.0, std::abs(f_prev.to_double()),
                                  m_max >= 1 ? std::abs(f_curr.to_double()) : 0.0});
  const double ulp = std::ldexp(1.0, -static_cast<int>(prec));
  Real p = p0;
  Real gamma_j = gamma0;
  double p0_d = p0.to_double();
  for (int j = 0; j <= m_max; ++j) {
    const Real& f = j == 0 ? f_prev : f_curr;
    blocks.push_back(a * p * f);
    // Forward recurrence in the first parameter amplifies errors at most like
    // q^j, which the factor q^{-j} in p cancels.
    noise.push_back(ulp * 16.0 * (j + 1) * std::abs(a.to_double()) * p0_d * fscale);
    if (j == m_max) break;
    // Next block: A_{j+1} = A_j (s + gamma_j) / gamma_j, p_{j+1} = p_j / q.
    a *= (s + gamma_j) / gamma_j;
    p /= q;
    if (j >= 1) {
      // F(a+1) = -[(2a - c + (b-a) z) F(a) + (c-a) F(a-1)] / (a (z-1)), a = s+gamma_j
      const Real aa = s + gamma_j;
      Real num = (aa * 2.0 - c + (minus_s - aa) * z) * f_curr + (c - aa) * f_prev;
      Real next = -num / (aa * zm1);
      f_prev = std::move(f_curr);
      f_curr = std::move(next);
    }
    gamma_j += 1.0;
  }
}

}  // namespace

std::vector<double> FracLapEvaluator::eval_all(double x, FracDiagnostics* diag) const {
  const Impl& im = *impl_;
  const double mu = spec_.scale;
  const double out_scale = std::pow(mu, -0.5 - 2.0 * s_);
  std::vector<double> out(spec_.n_max + 1);

  mp::Prec prec = im.base_prec;
  FracDiagnostics d;
  for (int attempt = 0;; ++attempt) {
    const BlockTable* te = &im.even;
    const BlockTable* to = &im.odd;
    BlockTable local_e, local_o;
    if (prec != im.base_prec) {
      local_e = build_table(im.lambda, false, im.m_even, prec);
      local_o = build_table(im.lambda, true, im.m_odd, prec);
      te = &local_e;
      to = &local_o;
    }
    const Real y = Real(x, prec) / mu;
    std::vector<Real> blocks;
    std::vector<double> noise;
    double worst = 0.0, worst_bits = 0.0;
    for (int par = 0; par < 2; ++par) {
      const bool odd = par == 1;
      const int m_max = odd ? im.m_odd : im.m_even;
      if (m_max < 0) continue;
      frac_blocks(im.lambda, s_, odd, m_max, y, prec, blocks, noise);
      const ParityResult r = combine(odd ? *to : *te, blocks, noise, prec);
      for (int m = 0; m <= m_max; ++m) {
        const double v = r.values[m].to_double();
        out[2 * m + par] = v * out_scale;
        const double denom = std::max(std::abs(v), r.scale[m]);
        if (denom > 0.0) {
          worst = std::max(worst, r.err[m] / denom);
          worst_bits = std::max(worst_bits, std::log2(std::max(1.0, r.err[m] / denom) *
                                                      std::ldexp(1.0, static_cast<int>(prec))));
        }
      }
    }
    d.precision_bits = prec;
    d.est_rel_error = worst;
    d.bits_lost = std::min<double>(worst_bits, prec);
    d.refinements = attempt;
    if (worst <= opt_.target_rel_error || attempt >= 4) break;
    prec = round_prec(prec + std::max(64.0, std::log2(worst / opt_.target_rel_error) + 32.0));
  }
  d.accuracy_warning = d.est_rel_error > opt_.warn_rel_error;
  if (diag) *diag = d;
  return out;
}

// ---------------------------------------------------------------------------
// Fourier transform

struct FourierEvaluator::Impl {
  double lambda;
  int m_even;
  int m_odd;
  mp::Prec base_prec;
  BlockTable even, odd;
};

FourierEvaluator::FourierEvaluator(const BasisSpec& spec, const FracOptions& opt)
    : spec_(spec), opt_(opt) {
  spec.validate();
  if (spec.n_max > opt.max_degree) {
    throw DomainError("basis degree " + std::to_string(spec.n_max) +
                      " exceeds the configured maximum " + std::to_string(opt.max_degree));
  }
  impl_ = std::make_unique<Impl>();
  impl_->lambda = spec.lambda;
  impl_->m_even = spec.n_max / 2;
  impl_->m_odd = spec.n_max >= 1 ? (spec.n_max - 1) / 2 : -1;
  auto flat = [](int) { return 1.0; };
  const double bits = std::max(cancellation_bits(spec.lambda, false, impl_->m_even, flat),
                               cancellation_bits(spec.lambda, true, impl_->m_odd, flat));
  impl_->base_prec = round_prec(bits + 53 + kGuardBits);
  impl_->even = build_table(spec.lambda, false, impl_->m_even, impl_->base_prec);
  impl_->odd = build_table(spec.lambda, true, impl_->m_odd, impl_->base_prec);
}

FourierEvaluator::~FourierEvaluator() = default;
FourierEvaluator::FourierEvaluator(FourierEvaluator&&) noexcept = default;

namespace {

/// Transforms of the building blocks at zeta > 0:
///   even: 2^{1-g}/Gamma(g) zeta^{g-1/2} K_{g-1/2}(zeta),       g = j + (lam+1)/2
///   odd:  2^{1-g}/Gamma(g) zeta^{g-1/2} K_{g-3/2}(zeta) (times -i sign xi), g = j + lam/2 + 1
/// At zeta = 0 the even limit 2^{1-g}/Gamma(g) 2^{nu-1} Gamma(nu) is used.
void fourier_blocks(double lambda, bool odd, int m_max, const Real& zeta, mp::Prec prec,
                    std::vector<Real>& blocks, std::vector<double>& noise) {
  blocks.clear();
  noise.clear();
  if (m_max < 0) return;
  const Real lam(lambda, prec);
  Real g = odd ? lam * 0.5 + 1.0 : (lam + 1.0) * 0.5;
  Real nu = g - 0.5;
  // coef_j = 2^{1-g_j} / Gamma(g_j)
  Real coef = mp::exp((1.0 - g) * mp::log(Real(2.0, prec)) - mp::lgamma(g));
  const double ulp = std::ldexp(1.0, -static_cast<int>(prec));
  if (zeta.is_zero()) {
    for (int j = 0; j <= m_max; ++j) {
      // z^nu K_nu(z) -> 2^{nu-1} Gamma(nu)
      Real v = coef * mp::exp((nu - 1.0) * mp::log(Real(2.0, prec)) + mp::lgamma(nu));
      noise.push_back(ulp * 8.0 * std::abs(v.to_double()));
      blocks.push_back(std::move(v));
      coef /= g * 2.0;
      g += 1.0;
      nu += 1.0;
    }
    return;
  }
  const Real order0 = odd ? nu - 1.0 : nu;
  const std::vector<Real> k = bessel_k_sequence(order0, m_max + 1, zeta);
  Real zp = mp::pow(zeta, nu);
  for (int j = 0; j <= m_max; ++j) {
    Real v = coef * zp * k[j];
    noise.push_back(ulp * 32.0 * (j + 1) * std::abs(v.to_double()));
    blocks.push_back(std::move(v));
    coef /= g * 2.0;
    g += 1.0;
    zp *= zeta;
  }
}

}  // namespace

std::vector<std::complex<double>> FourierEvaluator::eval_all(double xi, FracDiagnostics* diag) const {
  const Impl& im = *impl_;
  const double mu = spec_.scale;
  const double out_scale = std::sqrt(mu);
  const double zeta_d = std::abs(mu * xi);
  const double sgn = xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0);
  std::vector<std::complex<double>> out(spec_.n_max + 1);
  if (zeta_d == 0.0 && !(im.lambda > 0.0)) {
    throw DomainError("fourier_mmgf: transform of even MMGFs is unbounded at xi = 0 for lambda <= 0");
  }

  mp::Prec prec = im.base_prec;
  FracDiagnostics d;
  for (int attempt = 0;; ++attempt) {
    const BlockTable* te = &im.even;
    const BlockTable* to = &im.odd;
    BlockTable local_e, local_o;
    if (prec != im.base_prec) {
      local_e = build_table(im.lambda, false, im.m_even, prec);
      local_o = build_table(im.lambda, true, im.m_odd, prec);
      te = &local_e;
      to = &local_o;
    }
    const Real zeta(zeta_d, prec);
    std::vector<Real> blocks;
    std::vector<double> noise;
    double worst = 0.0;
    for (int par = 0; par < 2; ++par) {
      const bool odd = par == 1;
      const int m_max = odd ? im.m_odd : im.m_even;
      if (m_max < 0) continue;
      if (odd && zeta_d == 0.0) {
        // Odd transforms are odd in xi; the symmetric value at 0 is 0.
        for (int m = 0; m <= m_max; ++m) out[2 * m + 1] = 0.0;
        continue;
      }
      fourier_blocks(im.lambda, odd, m_max, zeta, prec, blocks, noise);
      const ParityResult r = combine(odd ? *to : *te, blocks, noise, prec);
      for (int m = 0; m <= m_max; ++m) {
        const double v = r.values[m].to_double() * out_scale;
        out[2 * m + par] = odd ? std::complex<double>(0.0, -sgn * v) : std::complex<double>(v, 0.0);
        const double denom = std::max(std::abs(r.values[m].to_double()), r.scale[m]);
        if (denom > 0.0) worst = std::max(worst, r.err[m] / denom);
      }
    }
    d.precision_bits = prec;
    d.est_rel_error = worst;
    d.refinements = attempt;
    if (worst <= opt_.target_rel_error || attempt >= 4) break;
    prec = round_prec(prec + std::max(64.0, std::log2(worst / opt_.target_rel_error) + 32.0));
  }
  d.accuracy_warning = d.est_rel_error > opt_.warn_rel_error;
  if (diag) *diag = d;
  return out;
}

// ---------------------------------------------------------------------------

double frac_lap_mmgf(const BasisSpec& spec, int n, double s, double x, FracDiagnostics* diag,
                     const FracOptions& opt) {
  if (n < 0) throw DomainError("frac_lap_mmgf: n must be non-negative");
  BasisSpec b = spec;
  b.n_max = n;
  return FracLapEvaluator(b, s, opt).eval_all(x, diag)[n];
}

std::complex<double> fourier_mmgf(const BasisSpec& spec, int n, double xi, FracDiagnostics* diag,
                                  const FracOptions& opt) {
  if (n < 0) throw DomainError("fourier_mmgf: n must be non-negative");
  BasisSpec b = spec;
  b.n_max = n;
  if (xi == 0.0 && n % 2 == 1) return 0.0;
  if (xi == 0.0 && spec.lambda <= 0.0) {
    throw DomainError("fourier_mmgf: transform of even MMGFs is unbounded at xi = 0 for lambda <= 0");
  }
  return FourierEvaluator(b, opt).eval_all(xi, diag)[n];
}

std::complex<double> inv_fourier_mmgf(const BasisSpec& spec, int n, double x, FracDiagnostics* diag,
                                      const FracOptions& opt) {
  return std::conj(fourier_mmgf(spec, n, x, diag, opt));
}

DecayExponent decay_exponent(double lambda, double s, Parity parity) {
  if (!(lambda > -0.5)) throw DomainError("decay_exponent: lambda must exceed -1/2");
  if (!(s > 0.0)) throw DomainError("decay_exponent: s must be positive");
  if (parity == Parity::Even) {
    if (lambda < 0.0) return {s + (lambda + 1.0) / 2.0, false};
    return {s + 0.5, lambda == 0.0};
  }
  // Odd blocks x (1+x^2)^{-gamma}, gamma = lambda/2 + 1: the threshold is gamma = 3/2.
  if (lambda < 1.0) return {s + (lambda + 1.0) / 2.0, false};
  return {s + 1.0, lambda == 1.0};
}

}  // namespace ratspec
