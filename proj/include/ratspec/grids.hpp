/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Gauss-Gegenbauer quadrature and its image on the real line under the
// algebraic map, plus the MMGF interpolation operator built on it.

#pragma once

#include <string>
#include <vector>

#include "ratspec/mmgf.hpp"

namespace ratspec {

struct GaussRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // for the weight (1-t^2)^{lambda-1/2}
};

/// N+1 point Gauss rule for the Gegenbauer weight (Golub-Welsch).
GaussRule gauss_gegenbauer(int n, double lambda);

struct MappedGrid {
  BasisSpec basis;
  std::vector<double> t_nodes;
  std::vector<double> x_nodes;
  std::vector<double> weights;  // real-line weights
  std::vector<double> rho;      // underlying Gegenbauer weights

  int size() const { return static_cast<int>(x_nodes.size()); }
};

/// Grid with basis.n_max + 1 nodes: x_j = mu t_j / sqrt(1-t_j^2),
/// w_j = mu (1-t_j^2)^{-(lambda+1)} rho_j.
MappedGrid mapped_grid(const BasisSpec& basis);

/// Discrete transform: c_n = (1/gamma_n) sum_j u_j R_n(x_j) w_j.
SpectralField interpolate(const MappedGrid& grid, const std::vector<double>& samples);
SpectralField interpolate(const BasisSpec& basis, const std::vector<double>& samples);

/// Sum_j u_j v_j w_j.
double integrate(const MappedGrid& grid, const std::vector<double>& u, const std::vector<double>& v);

/// Basis values B(j, n) = R_{n,mu}(x_j), row-major, (N+1) x (N+1).
std::vector<double> basis_at_nodes(const MappedGrid& grid);

/// CSV with columns j,t,x,weight.
std::string grid_to_csv(const MappedGrid& grid);

}  // namespace ratspec
