#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "setidet/hermitian_eig.hpp"
#include "setidet/signal.hpp"

// Brute-force reference implementations used to pin the fast kernels.
// Everything here is direct-from-definition (O(N^2) transforms, double
// loops, naive accumulation) and deliberately avoids the library's FFT
// and detector code paths.

namespace oracle {

using setidet::ComplexSeries;
using cdouble = std::complex<double>;

inline std::vector<cdouble> dft(const std::vector<cdouble>& x) {
  const std::size_t n = x.size();
  std::vector<cdouble> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cdouble acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = -2.0 * std::numbers::pi * double(k) * double(j) / double(n);
      acc += x[j] * cdouble(std::cos(a), std::sin(a));
    }
    out[k] = acc;
  }
  return out;
}

inline double energy(const ComplexSeries& x) {
  double acc = 0.0;
  for (const auto& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc / double(x.size());
}

inline std::vector<double> periodogram_bins(const ComplexSeries& x,
                                            std::uint32_t blocks, bool windowed) {
  const std::size_t nt = x.size() / blocks;
  std::vector<double> bins(nt, 0.0);
  for (std::uint32_t m = 0; m < blocks; ++m) {
    std::vector<cdouble> block(x.begin() + std::ptrdiff_t(m * nt),
                               x.begin() + std::ptrdiff_t((m + 1) * nt));
    if (windowed && nt >= 2) {
      for (std::size_t k = 0; k < nt; ++k) {
        block[k] *= 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * double(k) /
                                           double(nt - 1));
      }
    }
    const auto spec = dft(block);
    for (std::size_t k = 0; k < nt; ++k) bins[k] += std::norm(spec[k]);
  }
  for (auto& b : bins) b /= double(blocks);
  return bins;
}

inline double averaged_periodogram(const ComplexSeries& x, std::uint32_t blocks,
                                   bool windowed) {
  const auto bins = periodogram_bins(x, blocks, windowed);
  double best = bins[0];
  for (const double b : bins) best = std::max(best, b);
  return best;
}

// R(tau) = (1/(N-tau-1)) sum_{n=tau+1}^{N-1} x[n] conj(x[n-tau]);
// statistic = max over tau in [1, N-2] of |R(tau)| / energy.
inline double time_lag(const ComplexSeries& x) {
  const std::size_t n = x.size();
  const double e = energy(x);
  double best = -1.0;
  for (std::size_t tau = 1; tau + 1 < n; ++tau) {
    cdouble acc = 0.0;
    for (std::size_t i = tau + 1; i < n; ++i) acc += x[i] * std::conj(x[i - tau]);
    best = std::max(best, std::abs(acc) / double(n - tau - 1));
  }
  return best / e;
}

// Naive accumulation of the N-M overlapping window outer products
// (windows start at t = 0 .. N-M-1).
inline setidet::HermitianMatrix autocorr(const ComplexSeries& x, std::uint32_t dim) {
  const std::size_t n = x.size();
  const std::size_t m = dim;
  setidet::HermitianMatrix r(m);
  for (std::size_t t = 0; t + m < n; ++t) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        r.at(i, j) += x[t + i] * std::conj(x[t + j]);
  }
  const double scale = 1.0 / double(n - m - 1);
  for (auto& v : r.a) v *= scale;
  // symmetrize to the Hermitian average
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const cdouble h = 0.5 * (r.at(i, j) + std::conj(r.at(j, i)));
      r.at(i, j) = h;
      r.at(j, i) = std::conj(h);
    }
  return r;
}

// Closed-form eigenvalues of [[a, b], [conj(b), c]] (a, c real).
inline std::pair<double, double> eig2x2(double a, cdouble b, double c) {
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
  return {mean - disc, mean + disc};
}

inline double frobenius(const setidet::HermitianMatrix& m) {
  double acc = 0.0;
  for (const auto& v : m.a) acc += std::norm(v);
  return std::sqrt(acc);
}

inline double max_abs_diff(const setidet::HermitianMatrix& a,
                           const setidet::HermitianMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i)
    worst = std::max(worst, std::abs(a.a[i] - b.a[i]));
  return worst;
}

}  // namespace oracle
