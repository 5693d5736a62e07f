/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "ratspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ratspec/errors.hpp"

namespace ratspec {

DenseMatrix::DenseMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw DomainError("DenseMatrix: negative dimension");
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<double> DenseMatrix::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != cols_) throw DomainError("DenseMatrix::apply: size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double* row = &data_[static_cast<size_t>(i) * cols_];
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

double DenseMatrix::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product: size mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

LuFactor lu_factor(DenseMatrix a) {
  const int n = a.rows();
  if (a.cols() != n) throw DomainError("lu_factor: matrix must be square");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    }
    if (!(best >= 1e-300)) throw SingularMatrixError("lu_factor: matrix is singular");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(perm[k], perm[p]);
    }
    const double piv = a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double l = a(i, k) / piv;
      a(i, k) = l;
      if (l == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return {std::move(a), std::move(perm)};
}

std::vector<double> lu_solve(const LuFactor& f, const std::vector<double>& b) {
  const int n = f.lu.rows();
  if (static_cast<int>(b.size()) != n) throw DomainError("lu_solve: size mismatch");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

std::vector<double> lu_solve(const DenseMatrix& a, const std::vector<double>& b) {
  return lu_solve(lu_factor(a), b);
}

TridiagEigen eig_sym_tridiag(const std::vector<double>& diag, const std::vector<double>& offdiag) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return {};
  if (static_cast<int>(offdiag.size()) != n - 1) {
    throw DomainError("eig_sym_tridiag: offdiag must have length n-1");
  }
  std::vector<double> d = diag;
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());
  // Only the first row of the accumulated rotation matrix is kept.
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw ConvergenceError("eig_sym_tridiag: QL iteration did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (r == 0.0 && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
  TridiagEigen out;
  out.values.reserve(n);
  out.first_components.reserve(n);
  for (int k : order) {
    out.values.push_back(d[k]);
    out.first_components.push_back(z[k]);
  }
  return out;
}

namespace {

void to_hessenberg(DenseMatrix& h) {
  const int n = h.rows();
  std::vector<double> ort(n, 0.0);
  const int high = n - 1;
  for (int m = 1; m < high; ++m) {
    double scale = 0.0;
    for (int i = m; i <= high; ++i) scale += std::abs(h(i, m - 1));
    if (scale == 0.0) continue;
    double hh = 0.0;
    for (int i = high; i >= m; --i) {
      ort[i] = h(i, m - 1) / scale;
      hh += ort[i] * ort[i];
    }
    double g = std::sqrt(hh);
    if (ort[m] > 0) g = -g;
    hh -= ort[m] * g;
    ort[m] -= g;
    for (int j = m; j < n; ++j) {
      double f = 0.0;
      for (int i = high; i >= m; --i) f += ort[i] * h(i, j);
      f /= hh;
      for (int i = m; i <= high; ++i) h(i, j) -= f * ort[i];
    }
    for (int i = 0; i <= high; ++i) {
      double f = 0.0;
      for (int j = high; j >= m; --j) f += ort[j] * h(i, j);
      f /= hh;
      for (int j = m; j <= high; ++j) h(i, j) -= f * ort[j];
    }
    ort[m] *= scale;
    h(m, m - 1) = scale * g;
    for (int i = m + 1; i <= high; ++i) h(i, m - 1) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr).
void hessenberg_qr(DenseMatrix& h, std::vector<double>& wr, std::vector<double>& wi) {
  const int nn = h.rows();
  int n = nn - 1;
  const int low = 0;
  const double eps = std::ldexp(1.0, -52);
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, w, x, y;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(h(i, j));

  int iter = 0;
  int total_iter = 0;
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(h(l, l - 1)) < eps * s) break;
      --l;
    }
    if (l == n) {
      h(n, n) += exshift;
      wr[n] = h(n, n);
      wi[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      h(n, n) += exshift;
      h(n - 1, n - 1) += exshift;
      x = h(n, n);
      if (q >= 0) {
        z = p >= 0 ? p + z : p - z;
        wr[n - 1] = x + z;
        wr[n] = z != 0.0 ? x - w / z : wr[n - 1];
        wi[n - 1] = wi[n] = 0.0;
      } else {
        wr[n - 1] = wr[n] = x + p;
        wi[n - 1] = z;
        wi[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      x = h(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = h(n - 1, n - 1);
        w = h(n, n - 1) * h(n - 1, n);
      }
      // Exceptional shifts.
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) h(i, i) -= x;
        s = std::abs(h(n, n - 1)) + std::abs(h(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) h(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;
      if (++total_iter > 100 * nn) throw ConvergenceError("eig_dense: QR iteration did not converge");

      int m = n - 2;
      while (m >= l) {
        z = h(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - z - r - s;
        r = h(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            eps * (std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1))))) {
          break;
        }
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        h(i, i - 2) = 0.0;
        if (i > m + 2) h(i, i - 3) = 0.0;
      }
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = k != n - 1;
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0.0) continue;
        if (k != m) {
          h(k, k - 1) = -s * x;
        } else if (l != m) {
          h(k, k - 1) = -h(k, k - 1);
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j < nn; ++j) {
          p = h(k, j) + q * h(k + 1, j);
          if (notlast) {
            p += r * h(k + 2, j);
            h(k + 2, j) -= p * z;
          }
          h(k, j) -= p * x;
          h(k + 1, j) -= p * y;
        }
        for (int i = 0; i <= std::min(n, k + 3); ++i) {
          p = x * h(i, k) + y * h(i, k + 1);
          if (notlast) {
            p += z * h(i, k + 2);
            h(i, k + 2) -= p * r;
          }
          h(i, k) -= p;
          h(i, k + 1) -= p * q;
        }
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> eig_dense(const DenseMatrix& a) {
  const int n = a.rows();
  if (a.cols() != n) throw DomainError("eig_dense: matrix must be square");
  if (n == 0) return {};
  DenseMatrix h = a;
  to_hessenberg(h);
  std::vector<double> wr(n), wi(n);
  hessenberg_qr(h, wr, wi);
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  return out;
}

DenseMatrix cholesky(const DenseMatrix& a) {
  const int n = a.rows();
  if (a.cols() != n) throw DomainError("cholesky: matrix must be square");
  DenseMatrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw DomainError("cholesky: matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

}  // namespace ratspec
