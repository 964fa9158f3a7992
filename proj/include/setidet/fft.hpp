#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "setidet/errors.hpp"

// Complex DFT kernels. Power-of-two lengths run an iterative radix-2
// Cooley-Tukey with a precomputed twiddle table; every other length goes
// through Bluestein's chirp-z embedding into a power-of-two convolution,
// so any length is supported in O(n log n).
//
// Convention: unnormalized forward transform
//     X[k] = sum_n x[n] exp(-2*pi*i*k*n/N),
// inverse scaled by 1/N so inverse(forward(x)) == x.

namespace setidet {

using cdouble = std::complex<double>;

class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidArgumentError("Fft: length must be >= 1");
    if ((n & (n - 1)) == 0) {
      init_pow2(n);
    } else {
      init_bluestein(n);
    }
  }

  std::size_t size() const { return n_; }

  void forward(cdouble* data) const { transform(data, false); }
  void inverse(cdouble* data) const {
    transform(data, true);
    const double s = 1.0 / double(n_);
    for (std::size_t i = 0; i < n_; ++i) data[i] *= s;
  }

  void forward(std::vector<cdouble>& v) const { check(v), forward(v.data()); }
  void inverse(std::vector<cdouble>& v) const { check(v), inverse(v.data()); }

  // Shared per-thread plan cache; plans are immutable once built.
  static const Fft& plan(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<Fft>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Fft>(n);
    return *slot;
  }

 private:
  void check(const std::vector<cdouble>& v) const {
    if (v.size() != n_) throw InvalidArgumentError("Fft: buffer length mismatch");
  }

  void init_pow2(std::size_t n) {
    // twiddle[j] = exp(-2*pi*i*j/n), j in [0, n/2)
    twiddle_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double a = -2.0 * std::numbers::pi * double(j) / double(n);
      twiddle_[j] = {std::cos(a), std::sin(a)};
    }
    bitrev_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t(1) << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b) r |= ((i >> b) & 1u) << (log2n - 1 - b);
      bitrev_[i] = r;
    }
  }

  void init_bluestein(std::size_t n) {
    conv_len_ = 1;
    while (conv_len_ < 2 * n - 1) conv_len_ <<= 1;
    sub_ = std::make_unique<Fft>(conv_len_);
    // chirp[k] = exp(+i*pi*k^2/n); k^2 is reduced mod 2n in exact integer
    // arithmetic so the phase stays accurate for large k.
    chirp_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t km = std::uint64_t(k) % (2 * n);
      const std::uint64_t k2 = std::uint64_t((unsigned __int128)(km) * km % (2 * n));
      const double a = std::numbers::pi * double(k2) / double(n);
      chirp_[k] = {std::cos(a), std::sin(a)};
    }
    // Spectrum of the (wrapped, conjugate-symmetric) chirp kernel.
    kernel_fft_.assign(conv_len_, cdouble{});
    kernel_fft_[0] = chirp_[0];
    for (std::size_t k = 1; k < n; ++k) {
      kernel_fft_[k] = chirp_[k];
      kernel_fft_[conv_len_ - k] = chirp_[k];
    }
    sub_->forward(kernel_fft_.data());
  }

  void pow2_transform(cdouble* data, bool inv) const {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = bitrev_[i];
      if (i < r) std::swap(data[i], data[r]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t step = n / len;
      for (std::size_t base = 0; base < n; base += len) {
        for (std::size_t j = 0; j < half; ++j) {
          cdouble w = twiddle_[j * step];
          if (inv) w = std::conj(w);
          const cdouble t = data[base + j + half] * w;
          const cdouble u = data[base + j];
          data[base + j] = u + t;
          data[base + j + half] = u - t;
        }
      }
    }
  }

  void transform(cdouble* data, bool inv) const {
    if (n_ == 1) return;
    if (!sub_) {
      pow2_transform(data, inv);
      return;
    }
    // Bluestein: X[k] = conj(b[k]) * sum_n (x[n] conj(b[n])) b[k-n]
    // with b[m] = exp(i*pi*m^2/n); the inverse flips the chirp sign.
    const std::size_t n = n_;
    std::vector<cdouble> a(conv_len_, cdouble{});
    for (std::size_t k = 0; k < n; ++k) {
      const cdouble b = inv ? chirp_[k] : std::conj(chirp_[k]);
      a[k] = data[k] * b;
    }
    sub_->forward(a.data());
    if (inv) {
      for (std::size_t k = 0; k < conv_len_; ++k) a[k] *= std::conj(kernel_fft_[k]);
    } else {
      for (std::size_t k = 0; k < conv_len_; ++k) a[k] *= kernel_fft_[k];
    }
    sub_->inverse(a.data());
    for (std::size_t k = 0; k < n; ++k) {
      const cdouble b = inv ? chirp_[k] : std::conj(chirp_[k]);
      data[k] = a[k] * b;
    }
  }

  std::size_t n_;
  std::vector<cdouble> twiddle_;
  std::vector<std::size_t> bitrev_;
  // Bluestein state (empty for power-of-two lengths).
  std::size_t conv_len_ = 0;
  std::unique_ptr<Fft> sub_;
  std::vector<cdouble> chirp_;
  std::vector<cdouble> kernel_fft_;
};

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace setidet
