/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Coefficients of the MMGFs as finite sums of rational building blocks,
// held in MPFR numbers. Shared by the operator evaluators and the Galerkin
// assembly, which both cancel heavily across the sums.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ratspec/mp.hpp"

namespace ratspec::detail {

using mp::Real;

constexpr long kGuardBits = 96;

/// Coefficients of R_n as sums of rational blocks, pre-multiplied by the
/// normalization a_m or b_m: rows[m][j] for n = 2m (even) or 2m+1 (odd).
struct BlockTable {
  std::vector<std::vector<Real>> rows;
};

inline BlockTable build_table(double lambda, bool odd, int m_max, mp::Prec prec) {
  BlockTable t;
  if (m_max < 0) return t;
  const Real lam(lambda, prec);
  const bool cheb = lambda == 0.0;
  Real pre(1.0, prec);
  if (odd && !cheb) pre = lam * 2.0;
  t.rows.resize(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    auto& row = t.rows[m];
    row.reserve(m + 1);
    row.push_back(pre);
    for (int j = 0; j < m; ++j) {
      // c_{j+1} / c_j = (j - m)(m + lam [+1] + j) / ((lam + 1/2 + j)(j + 1))
      Real r = row.back() * static_cast<double>(j - m);
      r *= lam + static_cast<double>(m + j + (odd ? 1 : 0));
      r /= (lam + (0.5 + j)) * static_cast<double>(j + 1);
      row.push_back(std::move(r));
    }
    if (!cheb) {
      if (odd) {
        pre *= (lam + (1.0 + m)) * (lam + (0.5 + m));
        pre /= static_cast<double>(m + 1) * (1.5 + m);
      } else {
        pre *= (lam + static_cast<double>(m)) * (lam + (0.5 + m));
        pre /= static_cast<double>(m + 1) * (0.5 + m);
      }
    }
  }
  return t;
}

/// log2 of sum_j |c_{mj}| w_j / w_0 for the largest m, where w_j is the
/// growth of the block prefactor (ratio w_{j+1}/w_j = growth(j)).
template <class Growth>
inline double cancellation_bits(double lambda, bool odd, int m, Growth growth) {
  if (m <= 0) return 0.0;
  double log_c = 0.0;  // natural log of |c_j| w_j / w_0
  double best = 0.0;
  std::vector<double> logs{0.0};
  for (int j = 0; j < m; ++j) {
    log_c += std::log(std::abs((j - m) * (lambda + m + j + (odd ? 1 : 0)))) -
             std::log((lambda + 0.5 + j) * (j + 1.0)) + std::log(growth(j));
    logs.push_back(log_c);
    best = std::max(best, log_c);
  }
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - best);
  return (best + std::log(acc)) / std::log(2.0);
}

inline long round_prec(double bits) {
  long p = static_cast<long>(std::ceil(bits / 64.0)) * 64;
  return std::max<long>(p, 128);
}

}  // namespace ratspec::detail
