/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Small dense linear algebra: LU, symmetric tridiagonal QL, Hessenberg QR.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ratspec {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0);
  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

  DenseMatrix transpose() const;
  std::vector<double> apply(const std::vector<double>& x) const;
  double norm_inf() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

/// Row-pivoted LU factors of a square matrix.
struct LuFactor {
  DenseMatrix lu;
  std::vector<int> perm;
};

/// Throws SingularMatrixError when a pivot falls below 1e-300 in magnitude.
LuFactor lu_factor(DenseMatrix a);
std::vector<double> lu_solve(const LuFactor& f, const std::vector<double>& b);
std::vector<double> lu_solve(const DenseMatrix& a, const std::vector<double>& b);

struct TridiagEigen {
  std::vector<double> values;            // ascending
  std::vector<double> first_components;  // first entry of each unit eigenvector
};

/// Implicit QL on the symmetric tridiagonal matrix with the given diagonal and
/// off-diagonal (length n-1).
TridiagEigen eig_sym_tridiag(const std::vector<double>& diag, const std::vector<double>& offdiag);

/// All eigenvalues of a general real matrix (Householder reduction to
/// Hessenberg form, then Francis double-shift QR).
std::vector<std::complex<double>> eig_dense(const DenseMatrix& a);

/// Lower Cholesky factor; throws DomainError if the matrix is not positive definite.
DenseMatrix cholesky(const DenseMatrix& a);

}  // namespace ratspec
