#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "setidet/errors.hpp"

// Dense complex Hermitian matrices and their eigenvalues.
//
// The solver reduces the matrix to real symmetric tridiagonal form with
// complex Householder reflectors (the subdiagonal phases are similarity-
// removable, so only their magnitudes are kept), then runs implicit-shift
// QL on the tridiagonal. Eigenvalues of an M x M matrix cost O(M^3) with
// a small constant; no eigenvectors are accumulated.

namespace setidet {

struct HermitianMatrix {
  std::size_t dim = 0;
  std::vector<std::complex<double>> a;  // row-major, dim*dim

  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t m) : dim(m), a(m * m) {}

  std::complex<double>& at(std::size_t i, std::size_t j) { return a[i * dim + j]; }
  const std::complex<double>& at(std::size_t i, std::size_t j) const {
    return a[i * dim + j];
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim; ++i) t += at(i, i).real();
    return t;
  }

  // Largest |A[i][j] - conj(A[j][i])| over all entries.
  double hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
    return worst;
  }
};

namespace detail {

// Implicit-shift QL on a real symmetric tridiagonal matrix.
// d[i] = diagonal, e[i] = coupling (i, i+1) with e[n-1] unused.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n < 2) return;
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 64) throw std::runtime_error("tridiag_ql: too many iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t ii = m; ii-- > l;) {
          double f = s * e[ii];
          const double b = c * e[ii];
          r = std::hypot(f, g);
          e[ii + 1] = r;
          if (r == 0.0) {
            d[ii + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[ii + 1] - p;
          r = (d[ii] - g) * s + 2.0 * c * b;
          p = s * r;
          d[ii + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

// All eigenvalues (real, ascending). Only the lower triangle is read.
inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& mat) {
  const std::size_t n = mat.dim;
  if (n == 0) throw InvalidArgumentError("hermitian_eigenvalues: empty matrix");
  std::vector<std::complex<double>> a = mat.a;  // working copy, lower triangle
  auto at = [&](std::size_t i, std::size_t j) -> std::complex<double>& {
    return a[i * n + j];
  };

  std::vector<double> d(n), e(n, 0.0);
  std::vector<std::complex<double>> v(n), p(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Householder reflector annihilating column k below the subdiagonal.
    const std::size_t len = n - 1 - k;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) norm2 += std::norm(at(k + 1 + i, k));
    const double alpha = std::sqrt(norm2);
    d[k] = at(k, k).real();
    e[k] = alpha;
    if (alpha == 0.0) continue;

    const std::complex<double> x0 = at(k + 1, k);
    const double ax0 = std::abs(x0);
    const std::complex<double> phase = (ax0 > 0.0) ? x0 / ax0 : std::complex<double>(1.0);
    for (std::size_t i = 0; i < len; ++i) v[i] = at(k + 1 + i, k);
    v[0] += phase * alpha;
    const double tau = 1.0 / (alpha * (alpha + ax0));  // 2 / ||v||^2

    // p = tau * B v over the trailing Hermitian block B = A[k+1.., k+1..].
    for (std::size_t i = 0; i < len; ++i) {
      std::complex<double> acc = 0.0;
      const std::size_t ri = k + 1 + i;
      for (std::size_t j = 0; j < i; ++j) acc += at(ri, k + 1 + j) * v[j];
      acc += at(ri, ri).real() * v[i];
      for (std::size_t j = i + 1; j < len; ++j) acc += std::conj(at(k + 1 + j, ri)) * v[j];
      p[i] = tau * acc;
    }
    std::complex<double> vhp = 0.0;
    for (std::size_t i = 0; i < len; ++i) vhp += std::conj(v[i]) * p[i];
    const std::complex<double> kk = 0.5 * tau * vhp;
    for (std::size_t i = 0; i < len; ++i) p[i] -= kk * v[i];  // w = p - K v

    // B <- B - v w^H - w v^H (lower triangle only).
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t ri = k + 1 + i;
      for (std::size_t j = 0; j <= i; ++j) {
        at(ri, k + 1 + j) -=
            v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);
      }
    }
  }
  if (n >= 2) {
    d[n - 2] = at(n - 2, n - 2).real();
    e[n - 2] = std::abs(at(n - 1, n - 2));
  }
  d[n - 1] = at(n - 1, n - 1).real();

  detail::tridiag_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace setidet
