/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Solvers for (sum_j rho_j (-Delta)^{alpha_j/2} + r(x)) u = f on the real line
// and the frequency-space collocation method in several dimensions.
//
// All phases run on the calling thread. Independent solves may run
// concurrently; nothing here holds shared mutable state.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "ratspec/fracops.hpp"
#include "ratspec/grids.hpp"
#include "ratspec/linalg.hpp"
#include "ratspec/mmgf.hpp"

namespace ratspec {

struct Term {
  double alpha;  // operator order in [0, 2]; 0 is the identity
  double rho;    // coefficient, >= 0
};

struct ProblemSpec {
  int dimension = 1;
  std::vector<Term> terms;
  /// Optional variable reaction coefficient r(x), 1D collocation only.
  std::function<double(double)> reaction;
  /// Source in 1D.
  std::function<double(double)> source;
  /// Source in d >= 2 dimensions, called with a point of length d.
  std::function<double(const std::vector<double>&)> source_nd;
  BasisSpec basis;

  void validate() const;
};

/// diag(gamma_0, ..., gamma_N).
DenseMatrix assemble_mass(const BasisSpec& spec);

struct StiffnessDiagnostics {
  long precision_bits = 0;
  double est_rel_error = 0.0;  // relative to sqrt(S_mm S_nn)
};

/// S_mn = ((-Delta)^{alpha/2} R_m, R_n) = int |xi|^alpha F[R_m] conj(F[R_n]) dxi.
/// Evaluated exactly from the block expansions and the Mellin transform of
/// products of K functions; entries with m + n odd are exactly 0.
DenseMatrix assemble_stiffness(const BasisSpec& spec, double alpha,
                               StiffnessDiagnostics* diag = nullptr);

/// Spectral-Galerkin solve of sum_j rho_j (-Delta)^{alpha_j/2} u = f with the
/// interpolated source I_N f on the right. No variable reaction.
SpectralField galerkin_solve(const ProblemSpec& problem);

/// D(i, j) = (-Delta)^{alpha/2} l_j(x_i) for the Lagrange basis on the mapped
/// Gauss nodes. alpha = 0 gives the identity.
DenseMatrix colloc_matrix(const BasisSpec& spec, double alpha);

struct CollocResult {
  MappedGrid grid;
  std::vector<double> nodal;  // u at the grid nodes
  SpectralField field;        // interpolant of the nodal values
};

/// Collocation solve of (sum_j rho_j (-Delta)^{alpha_j/2} + r) u = f.
CollocResult colloc_solve(const ProblemSpec& problem);

struct EigResult {
  std::vector<double> values;  // k smallest real eigenvalues, ascending
  int discarded = 0;           // complex eigenvalues filtered out
};

/// Smallest eigenvalues of ((-Delta)^{alpha/2} + x^2) by collocation.
/// Eigenvalues with |Im| > imag_tol |Re| are discarded. Throws
/// ConvergenceError when fewer than k real eigenvalues remain.
EigResult colloc_eig(const BasisSpec& spec, double alpha, int k, double imag_tol = 1e-6);

/// Result of the frequency-space collocation method. Tensors are stored
/// row-major with the last coordinate fastest, (N+1)^d entries.
struct NdResult {
  int dimension = 0;
  MappedGrid grid;       // physical-space nodes (per axis)
  MappedGrid freq_grid;  // frequency nodes (per axis)
  std::vector<std::complex<double>> f_hat;   // transform of I_N f at frequency nodes
  std::vector<std::complex<double>> u_hat;   // f_hat / (|xi|^alpha + rho)
  std::vector<std::complex<double>> u_coeffs;  // MMGF coefficients of u_hat

  /// u_N on the tensor grid coords^d via inverse transforms of the basis.
  std::vector<std::complex<double>> evaluate(const std::vector<double>& coords) const;
};

/// (-Delta)^{alpha/2} u + rho u = f in d >= 1 dimensions. The problem must
/// have one term with alpha in (0, 2] and an alpha = 0 term for rho > 0.
/// freq_basis fixes the frequency grid and the basis for u_hat; its n_max
/// must match the physical basis.
NdResult nd_colloc_solve(const ProblemSpec& problem, const BasisSpec& freq_basis);

/// sqrt(int (a - b)^2 dx) by mapped quadrature with 2(N+1) points on the
/// finer of the two bases.
double l2_error(const SpectralField& a, const SpectralField& b);

/// Same against a function. 2(N+1) points do not resolve a target outside
/// the space, so at least min_nodes are used.
double l2_error(const SpectralField& a, const std::function<double(double)>& b,
                int min_nodes = 1024);

/// ||a - pi_N ref|| with pi_N the L2 projection onto the space of a:
/// sqrt(sum_{n <= N} gamma_n (a_n - ref_n)^2). Drops the truncation tail of
/// ref. The bases must share lambda and scale and ref must be at least as
/// large.
double projected_l2_error(const SpectralField& a, const SpectralField& ref);

}  // namespace ratspec
