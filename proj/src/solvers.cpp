/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ratspec/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ratspec/detail/block_table.hpp"
#include "ratspec/errors.hpp"
#include "ratspec/mp.hpp"

namespace ratspec {

using mp::Real;

void ProblemSpec::validate() const {
  basis.validate();
  if (dimension < 1) throw ConfigError("problem dimension must be positive");
  if (terms.empty()) throw ConfigError("problem needs at least one operator term");
  bool positive = false;
  for (const Term& t : terms) {
    if (!(t.alpha >= 0.0 && t.alpha <= 2.0)) throw ConfigError("term order alpha must lie in [0, 2]");
    if (!(t.rho >= 0.0)) throw ConfigError("term coefficient rho must be non-negative");
    positive = positive || t.rho > 0.0;
  }
  if (!positive) throw ConfigError("at least one term needs a positive coefficient");
  if (dimension == 1 && !source) throw ConfigError("1D problem needs a source function");
  if (dimension > 1 && !source_nd) throw ConfigError("multi-dimensional problem needs a source function");
}

DenseMatrix assemble_mass(const BasisSpec& spec) {
  spec.validate();
  DenseMatrix m(spec.size(), spec.size());
  for (int n = 0; n <= spec.n_max; ++n) m(n, n) = norm_gamma(n, spec.lambda);
  return m;
}

namespace {

/// Stiffness block of one parity at mu = 1, indexed by m, n = 0..m_max (the
/// degrees 2m + parity).
///
/// The profile of block k is g_k xi^{nu_k} K_{a_k}(xi) with a_k = nu_k (even)
/// or nu_k - 1 (odd), and
///   int_0^inf t^{m-1} K_a K_b dt
///     = 2^{m-3} / Gamma(m) Gamma((m+a+b)/2) Gamma((m+a-b)/2) Gamma((m-a+b)/2) Gamma((m-a-b)/2).
/// With m = alpha + nu_k + nu_l + 1 the powers of two and the g_k collapse and
///   G_kl = 2 g_k g_l int = 2^alpha Gamma(C) v_{k+l} u_k u_l,
///   u_k = Gamma(B + k) / Gamma(g0 + k),  v_p = Gamma(A + p) / Gamma(m0 + p).
std::vector<std::vector<double>> stiffness_parity(double lambda, double alpha, bool odd, int m_max,
                                                  StiffnessDiagnostics& diag) {
  const double g0d = odd ? lambda / 2.0 + 1.0 : (lambda + 1.0) / 2.0;
  const double a_d = (alpha + 1.0) / 2.0 + lambda;
  const double b_d = odd ? (alpha + lambda) / 2.0 + 1.0 : (alpha + 1.0 + lambda) / 2.0;
  const double m0d = odd ? alpha + lambda + 2.0 : alpha + lambda + 1.0;

  // A-priori cancellation: the weight of block k in a row is u_k sqrt(v_2k).
  auto growth = [&](int k) {
    return (b_d + k) / (g0d + k) *
           std::sqrt((a_d + 2.0 * k) * (a_d + 2.0 * k + 1.0) / ((m0d + 2.0 * k) * (m0d + 2.0 * k + 1.0)));
  };
  const double bits = detail::cancellation_bits(lambda, odd, m_max, growth);
  long prec = detail::round_prec(2.0 * bits + 53 + detail::kGuardBits);

  std::vector<std::vector<double>> out(m_max + 1, std::vector<double>(m_max + 1, 0.0));
  for (int attempt = 0;; ++attempt) {
    const detail::BlockTable table = detail::build_table(lambda, odd, m_max, prec);
    const Real lam(lambda, prec), al(alpha, prec);
    const Real g0 = odd ? lam * 0.5 + 1.0 : (lam + 1.0) * 0.5;
    const Real a = (al + 1.0) * 0.5 + lam;
    const Real b = odd ? (al + lam) * 0.5 + 1.0 : (al + 1.0 + lam) * 0.5;
    const Real c = odd ? (al + 3.0) * 0.5 : (al + 1.0) * 0.5;
    const Real m0 = odd ? al + lam + 2.0 : al + lam + 1.0;
    const Real k0 = mp::exp(al * mp::log(Real(2.0, prec)) + mp::lgamma(c));

    std::vector<Real> u, v;
    u.push_back(mp::exp(mp::lgamma(b) - mp::lgamma(g0)));
    for (int k = 0; k < m_max; ++k) u.push_back(u.back() * (b + static_cast<double>(k)) / (g0 + static_cast<double>(k)));
    v.push_back(mp::exp(mp::lgamma(a) - mp::lgamma(m0)));
    for (int p = 0; p < 2 * m_max; ++p) v.push_back(v.back() * (a + static_cast<double>(p)) / (m0 + static_cast<double>(p)));

    // d_mk = c_mk u_k, and r_m = sum_k |d_mk| sqrt(v_2k) bounds the row.
    std::vector<std::vector<Real>> d(m_max + 1);
    std::vector<double> r(m_max + 1, 0.0);
    for (int m = 0; m <= m_max; ++m) {
      for (int k = 0; k <= m; ++k) {
        d[m].push_back(table.rows[m][k] * u[k]);
        r[m] += std::abs(d[m][k].to_double()) * std::sqrt(v[2 * k].to_double());
      }
    }
    std::vector<Real> w(m_max + 1, Real(prec));
    for (int m = 0; m <= m_max; ++m) {
      // w_l = sum_k d_mk v_{k+l}
      for (int l = 0; l <= m_max; ++l) {
        Real acc(prec);
        for (int k = 0; k <= m; ++k) acc.add_product(d[m][k], v[k + l]);
        w[l] = std::move(acc);
      }
      for (int n = m; n <= m_max; ++n) {
        Real acc(prec);
        for (int l = 0; l <= n; ++l) acc.add_product(w[l], d[n][l]);
        acc *= k0;
        out[m][n] = out[n][m] = acc.to_double();
      }
    }
    const double k0d = k0.to_double();
    const double unit = std::ldexp(1.0, -static_cast<int>(prec)) * 8.0 * (m_max + 1);
    double worst = 0.0;
    for (int m = 0; m <= m_max; ++m) {
      for (int n = m; n <= m_max; ++n) {
        const double scale = std::sqrt(std::abs(out[m][m] * out[n][n]));
        const double err = unit * k0d * r[m] * r[n];
        worst = std::max(worst, scale > 0.0 ? err / scale : INFINITY);
      }
    }
    diag.precision_bits = std::max<long>(diag.precision_bits, prec);
    if (worst <= 1e-17 || attempt >= 4) {
      diag.est_rel_error = std::max(diag.est_rel_error, worst);
      break;
    }
    prec = detail::round_prec(prec + std::max(64.0, std::log2(worst / 1e-17) + 32.0));
  }
  return out;
}

}  // namespace

DenseMatrix assemble_stiffness(const BasisSpec& spec, double alpha, StiffnessDiagnostics* diag) {
  spec.validate();
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("assemble_stiffness: alpha must lie in (0, 2]");
  StiffnessDiagnostics dg;
  DenseMatrix s(spec.size(), spec.size());
  const double scale = std::pow(spec.scale, -alpha);
  for (int par = 0; par < 2; ++par) {
    const int m_max = par == 0 ? spec.n_max / 2 : (spec.n_max - 1) / 2;
    if (spec.n_max < par) continue;
    const auto blk = stiffness_parity(spec.lambda, alpha, par == 1, m_max, dg);
    for (int m = 0; m <= m_max; ++m) {
      for (int n = 0; n <= m_max; ++n) s(2 * m + par, 2 * n + par) = scale * blk[m][n];
    }
  }
  if (dg.est_rel_error > 1e-6) {
    throw ConvergenceError("assemble_stiffness: estimated relative error " +
                           std::to_string(dg.est_rel_error) + " exceeds 1e-6");
  }
  if (diag) *diag = dg;
  return s;
}

SpectralField galerkin_solve(const ProblemSpec& problem) {
  problem.validate();
  if (problem.dimension != 1) throw ConfigError("galerkin_solve handles 1D problems only");
  if (problem.reaction) throw ConfigError("galerkin_solve does not support a variable reaction");
  const BasisSpec& spec = problem.basis;
  const int size = spec.size();
  DenseMatrix a(size, size);
  const DenseMatrix mass = assemble_mass(spec);
  for (const Term& t : problem.terms) {
    if (t.rho == 0.0) continue;
    const DenseMatrix op = t.alpha == 0.0 ? mass : assemble_stiffness(spec, t.alpha);
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) a(i, j) += t.rho * op(i, j);
    }
  }
  // F_n = (I_N f, R_n) = sum_j f(x_j) R_n(x_j) w_j.
  const MappedGrid grid = mapped_grid(spec);
  const std::vector<double> basis = basis_at_nodes(grid);
  std::vector<double> rhs(size, 0.0);
  for (int j = 0; j < size; ++j) {
    const double fw = problem.source(grid.x_nodes[j]) * grid.weights[j];
    for (int n = 0; n < size; ++n) rhs[n] += fw * basis[static_cast<size_t>(j) * size + n];
  }
  SpectralField out{spec, lu_solve(a, rhs)};
  return out;
}

DenseMatrix colloc_matrix(const BasisSpec& spec, double alpha) {
  spec.validate();
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw DomainError("colloc_matrix: alpha must lie in [0, 2]");
  const int size = spec.size();
  if (alpha == 0.0) return DenseMatrix::identity(size);
  const MappedGrid grid = mapped_grid(spec);
  const std::vector<double> basis = basis_at_nodes(grid);
  // B(k, j) = R_k(x_j) w_j / gamma_k
  DenseMatrix b(size, size);
  for (int k = 0; k < size; ++k) {
    const double g = norm_gamma(k, spec.lambda);
    for (int j = 0; j < size; ++j) b(k, j) = basis[static_cast<size_t>(j) * size + k] * grid.weights[j] / g;
  }
  DenseMatrix l(size, size);
  if (alpha == 2.0) {
    for (int i = 0; i < size; ++i) {
      const MmgfDerivs d = mmgf_eval_derivs(spec, grid.x_nodes[i]);
      for (int k = 0; k < size; ++k) l(i, k) = -d.d2[k];
    }
  } else {
    FracLapEvaluator ev(spec, alpha / 2.0);
    for (int i = 0; i < size; ++i) {
      const std::vector<double> row = ev.eval_all(grid.x_nodes[i]);
      for (int k = 0; k < size; ++k) l(i, k) = row[k];
    }
  }
  return l * b;
}

CollocResult colloc_solve(const ProblemSpec& problem) {
  problem.validate();
  if (problem.dimension != 1) throw ConfigError("colloc_solve handles 1D problems only");
  const BasisSpec& spec = problem.basis;
  const int size = spec.size();
  CollocResult res{mapped_grid(spec), {}, {}};
  DenseMatrix a(size, size);
  for (const Term& t : problem.terms) {
    if (t.rho == 0.0) continue;
    const DenseMatrix d = colloc_matrix(spec, t.alpha);
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) a(i, j) += t.rho * d(i, j);
    }
  }
  std::vector<double> f(size);
  for (int i = 0; i < size; ++i) {
    const double x = res.grid.x_nodes[i];
    if (problem.reaction) a(i, i) += problem.reaction(x);
    f[i] = problem.source(x);
  }
  res.nodal = lu_solve(a, f);
  res.field = interpolate(res.grid, res.nodal);
  return res;
}

EigResult colloc_eig(const BasisSpec& spec, double alpha, int k, double imag_tol) {
  spec.validate();
  if (k < 1) throw DomainError("colloc_eig: k must be positive");
  if (k > spec.size()) throw DomainError("colloc_eig: k exceeds the matrix size");
  DenseMatrix a = colloc_matrix(spec, alpha);
  const MappedGrid grid = mapped_grid(spec);
  for (int i = 0; i < a.rows(); ++i) a(i, i) += grid.x_nodes[i] * grid.x_nodes[i];
  const auto ev = eig_dense(a);
  EigResult res;
  for (const auto& e : ev) {
    if (std::abs(e.imag()) > imag_tol * std::abs(e.real())) {
      ++res.discarded;
    } else {
      res.values.push_back(e.real());
    }
  }
  std::sort(res.values.begin(), res.values.end());
  if (static_cast<int>(res.values.size()) < k) {
    throw ConvergenceError("colloc_eig: only " + std::to_string(res.values.size()) +
                           " real eigenvalues, " + std::to_string(k) + " requested");
  }
  res.values.resize(k);
  return res;
}

namespace {

using Complex = std::complex<double>;

/// Apply the (n x n) matrix m along one axis of a d-dimensional tensor with
/// n entries per axis: out[.., i, ..] = sum_j m(i, j) in[.., j, ..].
template <class M, class T>
std::vector<Complex> apply_axis(const std::vector<T>& in, int d, int n, int axis, const M& m) {
  size_t stride = 1;
  for (int a = axis + 1; a < d; ++a) stride *= n;
  const size_t block = stride * n;
  std::vector<Complex> out(in.size(), 0.0);
  for (size_t base = 0; base < in.size(); base += block) {
    for (size_t off = 0; off < stride; ++off) {
      for (int i = 0; i < n; ++i) {
        Complex acc = 0.0;
        for (int j = 0; j < n; ++j) acc += m(i, j) * Complex(in[base + j * stride + off]);
        out[base + i * stride + off] = acc;
      }
    }
  }
  return out;
}

struct CMatrix {
  int n;
  std::vector<Complex> data;
  Complex operator()(int i, int j) const { return data[static_cast<size_t>(i) * n + j]; }
};

/// P(k, j) = R_k(x_j) w_j / gamma_k: samples to interpolation coefficients.
DenseMatrix interp_matrix(const MappedGrid& grid) {
  const int size = grid.size();
  const std::vector<double> basis = basis_at_nodes(grid);
  DenseMatrix p(size, size);
  for (int k = 0; k < size; ++k) {
    const double g = norm_gamma(k, grid.basis.lambda);
    for (int j = 0; j < size; ++j) p(k, j) = basis[static_cast<size_t>(j) * size + k] * grid.weights[j] / g;
  }
  return p;
}

/// Phi(i, k) = F[R_k](points_i), or its conjugate.
CMatrix transform_matrix(const BasisSpec& spec, const std::vector<double>& points, bool conjugate) {
  FourierEvaluator ev(spec);
  CMatrix m{spec.size(), {}};
  m.data.resize(points.size() * spec.size());
  for (size_t i = 0; i < points.size(); ++i) {
    const auto row = ev.eval_all(points[i]);
    for (int k = 0; k < spec.size(); ++k) {
      m.data[i * spec.size() + k] = conjugate ? std::conj(row[k]) : row[k];
    }
  }
  return m;
}

}  // namespace

NdResult nd_colloc_solve(const ProblemSpec& problem, const BasisSpec& freq_basis) {
  problem.validate();
  freq_basis.validate();
  const int d = problem.dimension;
  if (freq_basis.n_max != problem.basis.n_max) {
    throw ConfigError("frequency basis must have the same size as the physical basis");
  }
  double alpha = -1.0, rho = 0.0, coef = 0.0;
  for (const Term& t : problem.terms) {
    if (t.alpha == 0.0) {
      rho += t.rho;
    } else if (alpha < 0.0 || t.alpha == alpha) {
      alpha = t.alpha;
      coef += t.rho;
    } else {
      throw ConfigError("nd_colloc_solve supports a single fractional order");
    }
  }
  if (alpha < 0.0 || coef <= 0.0) throw ConfigError("nd_colloc_solve needs a fractional term");
  if (!(rho > 0.0)) throw ConfigError("nd_colloc_solve needs rho > 0");

  const int n = problem.basis.size();
  size_t total = 1;
  for (int a = 0; a < d; ++a) total *= n;

  NdResult res;
  res.dimension = d;
  res.grid = mapped_grid(problem.basis);
  res.freq_grid = mapped_grid(freq_basis);

  // Source samples on the tensor grid.
  std::vector<double> f(total);
  std::vector<double> point(d);
  for (size_t idx = 0; idx < total; ++idx) {
    size_t rem = idx;
    for (int a = d - 1; a >= 0; --a) {
      point[a] = res.grid.x_nodes[rem % n];
      rem /= n;
    }
    f[idx] = problem.source_nd(point);
  }

  // f_hat at frequency nodes: (Phi P) along every axis.
  const DenseMatrix p = interp_matrix(res.grid);
  const CMatrix phi = transform_matrix(problem.basis, res.freq_grid.x_nodes, false);
  CMatrix phip{n, std::vector<Complex>(static_cast<size_t>(n) * n, 0.0)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k) acc += phi(i, k) * p(k, j);
      phip.data[static_cast<size_t>(i) * n + j] = acc;
    }
  }
  std::vector<Complex> fh(f.begin(), f.end());
  for (int a = 0; a < d; ++a) fh = apply_axis(fh, d, n, a, phip);
  res.f_hat = fh;

  res.u_hat.resize(total);
  for (size_t idx = 0; idx < total; ++idx) {
    size_t rem = idx;
    double r2 = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      const double xi = res.freq_grid.x_nodes[rem % n];
      r2 += xi * xi;
      rem /= n;
    }
    res.u_hat[idx] = fh[idx] / (coef * std::pow(r2, alpha / 2.0) + rho);
  }

  const DenseMatrix pf = interp_matrix(res.freq_grid);
  std::vector<Complex> uc = res.u_hat;
  for (int a = 0; a < d; ++a) uc = apply_axis(uc, d, n, a, pf);
  res.u_coeffs = uc;
  return res;
}

std::vector<std::complex<double>> NdResult::evaluate(const std::vector<double>& coords) const {
  const int n = freq_grid.size();
  // Psi(i, k) = F^{-1}[R_k](coords_i) = conj(F[R_k](coords_i)), basis in xi.
  const CMatrix psi = transform_matrix(freq_grid.basis, coords, true);
  const int m = static_cast<int>(coords.size());
  // Apply axis by axis; the tensor changes extent from n to m per axis.
  std::vector<Complex> cur = u_coeffs;
  std::vector<int> ext(dimension, n);
  for (int a = 0; a < dimension; ++a) {
    size_t stride = 1;
    for (int b = a + 1; b < dimension; ++b) stride *= ext[b];
    size_t outer = 1;
    for (int b = 0; b < a; ++b) outer *= ext[b];
    std::vector<Complex> next(outer * m * stride, 0.0);
    for (size_t o = 0; o < outer; ++o) {
      for (size_t off = 0; off < stride; ++off) {
        for (int i = 0; i < m; ++i) {
          Complex acc = 0.0;
          for (int k = 0; k < n; ++k) acc += psi(i, k) * cur[(o * n + k) * stride + off];
          next[(o * m + i) * stride + off] = acc;
        }
      }
    }
    cur = std::move(next);
    ext[a] = m;
  }
  return cur;
}

namespace {

MappedGrid error_grid(const BasisSpec& finer, int min_nodes) {
  BasisSpec g = finer;
  g.n_max = std::max(2 * (finer.n_max + 1), min_nodes) - 1;
  return mapped_grid(g);
}

}  // namespace

double l2_error(const SpectralField& a, const SpectralField& b) {
  a.validate();
  b.validate();
  const MappedGrid grid = error_grid(a.basis.n_max >= b.basis.n_max ? a.basis : b.basis, 0);
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double e = eval_field(a, grid.x_nodes[j]) - eval_field(b, grid.x_nodes[j]);
    sum += grid.weights[j] * e * e;
  }
  return std::sqrt(sum);
}

double l2_error(const SpectralField& a, const std::function<double(double)>& b, int min_nodes) {
  a.validate();
  const MappedGrid grid = error_grid(a.basis, min_nodes);
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double e = eval_field(a, grid.x_nodes[j]) - b(grid.x_nodes[j]);
    sum += grid.weights[j] * e * e;
  }
  return std::sqrt(sum);
}

double projected_l2_error(const SpectralField& a, const SpectralField& ref) {
  a.validate();
  ref.validate();
  if (a.basis.lambda != ref.basis.lambda || a.basis.scale != ref.basis.scale) {
    throw DomainError("projected_l2_error: bases differ in lambda or scale");
  }
  if (ref.basis.n_max < a.basis.n_max) throw DomainError("projected_l2_error: reference basis is smaller");
  double sum = 0.0;
  for (int n = 0; n <= a.basis.n_max; ++n) {
    const double d = a.coeffs[n] - ref.coeffs[n];
    sum += norm_gamma(n, a.basis.lambda) * d * d;
  }
  return std::sqrt(sum);
}

}  // namespace ratspec
