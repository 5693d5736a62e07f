/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ratspec/grids.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ratspec/errors.hpp"
#include "ratspec/linalg.hpp"
#include "ratspec/specfun.hpp"

namespace ratspec {

GaussRule gauss_gegenbauer(int n, double lambda) {
  if (!(lambda > -0.5)) throw DomainError("gauss_gegenbauer: lambda must exceed -1/2");
  if (n < 0) throw DomainError("gauss_gegenbauer: n must be non-negative");
  const int m = n + 1;
  std::vector<double> diag(m, 0.0), off(n);
  for (int k = 1; k <= n; ++k) {
    const double b2 = k == 1 ? 1.0 / (2.0 * (1.0 + lambda))
                             : k * (k + 2.0 * lambda - 1.0) / (4.0 * (k + lambda) * (k + lambda - 1.0));
    off[k - 1] = std::sqrt(b2);
  }
  const TridiagEigen eig = eig_sym_tridiag(diag, off);

  GaussRule rule;
  rule.nodes = eig.values;
  // Enforce exact symmetry about 0.
  for (int j = 0; j < m / 2; ++j) {
    const double t = 0.5 * (rule.nodes[m - 1 - j] - rule.nodes[j]);
    rule.nodes[j] = -t;
    rule.nodes[m - 1 - j] = t;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;

  // Christoffel weights 1 / sum_k C_k(t)^2 / gamma_k are more accurate than the
  // squared first eigenvector components for small weights.
  std::vector<double> gam(m);
  for (int k = 0; k < m; ++k) gam[k] = norm_gamma(k, lambda);
  rule.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    const auto c = gegenbauer_all(n, lambda, rule.nodes[j]);
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += c[k] * c[k] / gam[k];
    rule.weights[j] = 1.0 / s;
  }
  for (int j = 0; j < m / 2; ++j) {
    const double w = 0.5 * (rule.weights[j] + rule.weights[m - 1 - j]);
    rule.weights[j] = rule.weights[m - 1 - j] = w;
  }
  return rule;
}

MappedGrid mapped_grid(const BasisSpec& basis) {
  basis.validate();
  const GaussRule rule = gauss_gegenbauer(basis.n_max, basis.lambda);
  MappedGrid g;
  g.basis = basis;
  g.t_nodes = rule.nodes;
  g.rho = rule.weights;
  const int m = basis.size();
  g.x_nodes.resize(m);
  g.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    const double t = rule.nodes[j];
    const double one_m_t2 = (1.0 - t) * (1.0 + t);
    g.x_nodes[j] = basis.scale * map_t_to_x(t);
    g.weights[j] = basis.scale * std::pow(one_m_t2, -(basis.lambda + 1.0)) * rule.weights[j];
  }
  return g;
}

std::vector<double> basis_at_nodes(const MappedGrid& grid) {
  const int m = grid.size();
  std::vector<double> b(static_cast<size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    const auto r = mmgf_eval_all(grid.basis, grid.x_nodes[j]);
    std::copy(r.begin(), r.end(), b.begin() + static_cast<size_t>(j) * m);
  }
  return b;
}

SpectralField interpolate(const MappedGrid& grid, const std::vector<double>& samples) {
  const int m = grid.size();
  if (static_cast<int>(samples.size()) != m) throw DomainError("interpolate: sample count must be N+1");
  SpectralField f;
  f.basis = grid.basis;
  f.coeffs.assign(m, 0.0);
  for (int j = 0; j < m; ++j) {
    const double uw = samples[j] * grid.weights[j];
    if (uw == 0.0) continue;
    const auto r = mmgf_eval_all(grid.basis, grid.x_nodes[j]);
    for (int n = 0; n < m; ++n) f.coeffs[n] += uw * r[n];
  }
  for (int n = 0; n < m; ++n) f.coeffs[n] /= norm_gamma(n, grid.basis.lambda);
  return f;
}

SpectralField interpolate(const BasisSpec& basis, const std::vector<double>& samples) {
  return interpolate(mapped_grid(basis), samples);
}

double integrate(const MappedGrid& grid, const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != grid.x_nodes.size() || v.size() != grid.x_nodes.size()) {
    throw DomainError("integrate: value arrays must match the grid size");
  }
  double s = 0.0;
  for (size_t j = 0; j < u.size(); ++j) s += u[j] * v[j] * grid.weights[j];
  return s;
}

std::string grid_to_csv(const MappedGrid& grid) {
  std::ostringstream os;
  os << "j,t,x,weight\n";
  char buf[128];
  for (int j = 0; j < grid.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", j, grid.t_nodes[j], grid.x_nodes[j],
                  grid.weights[j]);
    os << buf;
  }
  return os.str();
}

}  // namespace ratspec
