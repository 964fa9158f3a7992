#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "setidet/errors.hpp"
#include "setidet/fft.hpp"
#include "setidet/hermitian_eig.hpp"
#include "setidet/signal.hpp"
#include "setidet/window.hpp"

// The four detection statistics computed from one complex series x[0..N):
//
//   energy      (1/N) * sum |x[n]|^2
//   periodogram max over frequency bins of the squared-magnitude DFT,
//               averaged over M non-overlapping blocks of length N/M,
//               optionally Hamming-windowed per block
//   time_lag    max over lags tau in [1, N-2] of |R(tau)| / energy, with
//               R(tau) = (1/(N-tau-1)) * sum_{n=tau+1}^{N-1} x[n] conj(x[n-tau])
//   klt         largest eigenvalue of the windowed autocorrelation matrix
//               divided by its trace
//
// time_lag and the autocorrelation matrix are evaluated through
// zero-padded FFT correlation, which the tests pin against direct
// O(N^2) evaluation.

namespace setidet {

enum class DetectorKind { kEnergy, kPeriodogram, kTimeLag, kKlt };

struct DetectorSpec {
  DetectorKind kind = DetectorKind::kEnergy;
  std::uint32_t blocks = 1;    // periodogram: non-overlapping block count
  bool windowed = false;       // periodogram: Hamming window per block
  std::uint32_t dim = 64;      // klt: autocorrelation matrix dimension

  static DetectorSpec energy() { return {DetectorKind::kEnergy, 1, false, 0}; }
  static DetectorSpec periodogram(std::uint32_t blocks, bool windowed = false) {
    return {DetectorKind::kPeriodogram, blocks, windowed, 0};
  }
  static DetectorSpec time_lag() { return {DetectorKind::kTimeLag, 1, false, 0}; }
  static DetectorSpec klt(std::uint32_t dim = 64) {
    return {DetectorKind::kKlt, 1, false, dim};
  }

  bool operator==(const DetectorSpec&) const = default;

  // Canonical names follow the benchmark parameterization labels:
  // energy, time_lag, perio_8, perio_ham_64, max_KLT (dim 64), klt_<dim>.
  std::string name() const {
    switch (kind) {
      case DetectorKind::kEnergy: return "energy";
      case DetectorKind::kTimeLag: return "time_lag";
      case DetectorKind::kPeriodogram:
        return (windowed ? "perio_ham_" : "perio_") + std::to_string(blocks);
      case DetectorKind::kKlt:
        return dim == 64 ? "max_KLT" : "klt_" + std::to_string(dim);
    }
    return "?";
  }

  static DetectorSpec parse(const std::string& s) {
    if (s == "energy") return energy();
    if (s == "time_lag") return time_lag();
    if (s == "max_KLT" || s == "max_klt") return klt(64);
    auto tail_number = [&](const std::string& prefix) -> std::optional<std::uint32_t> {
      if (s.rfind(prefix, 0) != 0) return std::nullopt;
      const std::string tail = s.substr(prefix.size());
      if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
      return std::uint32_t(std::stoul(tail));
    };
    if (auto m = tail_number("perio_ham_")) return periodogram(*m, true);
    if (auto m = tail_number("perio_")) return periodogram(*m, false);
    if (auto m = tail_number("klt_")) return klt(*m);
    throw InvalidArgumentError("unknown detector spec: " + s);
  }
};

struct DetectionStatistic {
  double value = 0.0;
  std::optional<std::size_t> argmax;  // frequency bin, lag, or eigen-index
};

// ---------------------------------------------------------------------------

inline DetectionStatistic energy(const ComplexSeries& x) {
  if (x.empty()) throw InvalidArgumentError("energy: empty series");
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return {acc / double(x.size()), std::nullopt};
}

// Per-bin averaged periodogram (the max over these bins is the statistic).
inline std::vector<double> averaged_periodogram_bins(const ComplexSeries& x,
                                                     std::uint32_t blocks,
                                                     bool windowed = false) {
  const std::size_t n = x.size();
  if (blocks < 1) throw InvalidArgumentError("averaged_periodogram: blocks must be >= 1");
  if (n == 0 || n % blocks != 0)
    throw InvalidArgumentError("averaged_periodogram: series length " +
                               std::to_string(n) + " not divisible by " +
                               std::to_string(blocks) + " blocks");
  const std::size_t nt = n / blocks;  // block length = bin count
  if (nt < 2) throw InvalidArgumentError("averaged_periodogram: block length must be >= 2");

  const auto& fft = Fft::plan(nt);
  std::vector<double> win;
  if (windowed) win = hamming_window(nt);
  std::vector<double> bins(nt, 0.0);
  std::vector<cdouble> buf(nt);
  for (std::uint32_t m = 0; m < blocks; ++m) {
    const cdouble* src = x.data() + std::size_t(m) * nt;
    if (windowed) {
      for (std::size_t i = 0; i < nt; ++i) buf[i] = src[i] * win[i];
    } else {
      std::copy(src, src + nt, buf.begin());
    }
    fft.forward(buf.data());
    for (std::size_t i = 0; i < nt; ++i) bins[i] += std::norm(buf[i]);
  }
  const double scale = 1.0 / double(blocks);
  for (auto& b : bins) b *= scale;
  return bins;
}

inline DetectionStatistic averaged_periodogram(const ComplexSeries& x,
                                               std::uint32_t blocks,
                                               bool windowed = false) {
  const auto bins = averaged_periodogram_bins(x, blocks, windowed);
  const auto it = std::max_element(bins.begin(), bins.end());
  return {*it, std::size_t(it - bins.begin())};
}

namespace detail {

// Full positive-lag correlation sums S(tau) = sum_{n=tau}^{N-1} x[n] conj(x[n-tau])
// for tau in [0, max_lag], via zero-padded spectral convolution of length
// >= 2N (linear, not circular).
inline std::vector<cdouble> correlation_sums(const ComplexSeries& x, std::size_t max_lag) {
  const std::size_t n = x.size();
  const std::size_t len = next_pow2(2 * n);
  const auto& fft = Fft::plan(len);
  std::vector<cdouble> buf(len, cdouble{});
  std::copy(x.begin(), x.end(), buf.begin());
  fft.forward(buf.data());
  for (auto& v : buf) v = cdouble(std::norm(v), 0.0);
  fft.inverse(buf.data());
  buf.resize(max_lag + 1);
  return buf;
}

}  // namespace detail

inline DetectionStatistic time_lag(const ComplexSeries& x) {
  const std::size_t n = x.size();
  if (n < 3) throw InvalidArgumentError("time_lag: series length must be >= 3");
  const double theta_energy = energy(x).value;
  if (theta_energy == 0.0)
    throw DegenerateInputError("time_lag: zero-energy series");

  auto sums = detail::correlation_sums(x, n - 2);
  double best = -1.0;
  std::size_t best_lag = 1;
  const cdouble x0 = std::conj(x[0]);
  for (std::size_t tau = 1; tau + 1 < n; ++tau) {
    // Drop the n = tau product so the sum runs n in [tau+1, N-1].
    const cdouble s = sums[tau] - x[tau] * x0;
    const double r = std::abs(s) / double(n - tau - 1);
    if (r > best) {
      best = r;
      best_lag = tau;
    }
  }
  return {best / theta_energy, best_lag};
}

// Windowed autocorrelation matrix
//   R[i][j] = (1/(N-M-1)) * sum_{t=0}^{N-M-1} x[t+i] conj(x[t+j]),
// i.e. the N-M overlapping length-M windows' outer products. Computed
// per diagonal with sliding prefix sums in O(N*M); Hermitian by
// construction (one triangle accumulated, mirrored).
inline HermitianMatrix autocorr_matrix(const ComplexSeries& x, std::uint32_t dim) {
  const std::size_t n = x.size();
  const std::size_t m = dim;
  if (m < 1) throw InvalidArgumentError("autocorr_matrix: dim must be >= 1");
  if (m + 1 >= n)
    throw InvalidArgumentError("autocorr_matrix: dim " + std::to_string(m) +
                               " must be < series length - 1 = " + std::to_string(n - 1));
  const std::size_t n_windows = n - m;
  const double scale = 1.0 / double(n - m - 1);

  HermitianMatrix r(m);
  std::vector<cdouble> prefix(n + 1);
  for (std::size_t lag = 0; lag < m; ++lag) {
    // prefix[p+1] = sum_{q<=p} x[q+lag] conj(x[q])
    prefix[0] = 0.0;
    const std::size_t count = n - lag;
    for (std::size_t p = 0; p < count; ++p)
      prefix[p + 1] = prefix[p] + x[p + lag] * std::conj(x[p]);
    for (std::size_t j = 0; j + lag < m; ++j) {
      const cdouble sum = prefix[j + n_windows] - prefix[j];
      r.at(j + lag, j) = sum * scale;
      if (lag > 0) r.at(j, j + lag) = std::conj(sum) * scale;
    }
  }
  // Keep the diagonal exactly real.
  for (std::size_t i = 0; i < m; ++i) r.at(i, i) = cdouble(r.at(i, i).real(), 0.0);
  return r;
}

inline DetectionStatistic klt(const ComplexSeries& x, std::uint32_t dim) {
  const HermitianMatrix r = autocorr_matrix(x, dim);
  const double tr = r.trace();
  if (tr == 0.0) throw DegenerateInputError("klt: zero-trace autocorrelation matrix");
  const auto ev = hermitian_eigenvalues(r);
  return {ev.back() / tr, ev.size() - 1};
}

// Dispatch on a spec; the one entry point the calibration and pipeline
// layers use.
inline DetectionStatistic evaluate(const DetectorSpec& spec, const ComplexSeries& x) {
  switch (spec.kind) {
    case DetectorKind::kEnergy: return energy(x);
    case DetectorKind::kPeriodogram:
      return averaged_periodogram(x, spec.blocks, spec.windowed);
    case DetectorKind::kTimeLag: return time_lag(x);
    case DetectorKind::kKlt: return klt(x, spec.dim);
  }
  throw InvalidArgumentError("evaluate: bad detector kind");
}

// Benchmark set: time_lag, perio_{1,8,64}, perio_ham_{1,8,64}, max_KLT,
// plus the energy detector.
inline std::vector<DetectorSpec> default_detectors() {
  return {
      DetectorSpec::time_lag(),
      DetectorSpec::periodogram(1, false),
      DetectorSpec::periodogram(8, false),
      DetectorSpec::periodogram(64, false),
      DetectorSpec::periodogram(1, true),
      DetectorSpec::periodogram(8, true),
      DetectorSpec::periodogram(64, true),
      DetectorSpec::klt(64),
      DetectorSpec::energy(),
  };
}

}  // namespace setidet
