#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "setidet/errors.hpp"
#include "setidet/rng.hpp"
#include "setidet/window.hpp"

// Signal and trial generation for the binary detection experiment:
// complex white circular Gaussian noise under H0, and carrier / linear
// chirp / oversampled BPSK transmissions added to independent noise
// under H1. All frequencies are in cycles/sample and phases in cycles;
// there is no physical unit handling here.

namespace setidet {

using ComplexSeries = std::vector<std::complex<double>>;

enum class SignalKind { kCarrier, kChirp, kBpsk, kWindowedBpsk };

inline const char* to_string(SignalKind k) {
  switch (k) {
    case SignalKind::kCarrier: return "carrier";
    case SignalKind::kChirp: return "chirp";
    case SignalKind::kBpsk: return "bpsk";
    case SignalKind::kWindowedBpsk: return "bpsk_windowed";
  }
  return "?";
}

inline SignalKind signal_kind_from_string(const std::string& s) {
  if (s == "carrier") return SignalKind::kCarrier;
  if (s == "chirp") return SignalKind::kChirp;
  if (s == "bpsk") return SignalKind::kBpsk;
  if (s == "bpsk_windowed") return SignalKind::kWindowedBpsk;
  throw InvalidArgumentError("unknown signal kind: " + s);
}

struct SignalModel {
  SignalKind kind = SignalKind::kCarrier;
  double amplitude = 1.0;  // A >= 0
  double f0 = 0.0;         // cycles/sample
  double drift = 0.0;      // chirp rate d, cycles/sample^2 (chirp only)
  double phase = 0.0;      // cycles
  std::uint32_t oversample = 8;   // samples per symbol (BPSK kinds)
  std::uint64_t symbol_seed = 0;  // symbol-stream key (BPSK kinds)
};

struct NoiseModel {
  double sigma2 = 1.0;  // E|x|^2, > 0
  std::uint64_t seed = 0;
};

struct TrialParams {
  double f0 = 0.0;
  double drift = 0.0;
  double phase = 0.0;
};

namespace detail {
inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgumentError(std::string("nonfinite ") + what);
}
}  // namespace detail

inline void validate(const SignalModel& m) {
  detail::require_finite(m.amplitude, "amplitude");
  detail::require_finite(m.f0, "f0");
  detail::require_finite(m.drift, "drift");
  detail::require_finite(m.phase, "phase");
  if (m.amplitude < 0.0) throw InvalidArgumentError("amplitude must be >= 0");
  if (m.oversample < 1) throw InvalidArgumentError("oversample must be >= 1");
}

inline void validate(const NoiseModel& m) {
  detail::require_finite(m.sigma2, "sigma2");
  if (m.sigma2 <= 0.0) throw InvalidArgumentError("sigma2 must be > 0");
}

// i.i.d. circular complex Gaussian, zero mean, E|x|^2 = sigma2.
inline ComplexSeries gen_noise(std::size_t n, const NoiseModel& noise) {
  if (n < 1) throw InvalidArgumentError("gen_noise: n must be >= 1");
  validate(noise);
  RandomStream stream(noise.seed, StreamRole::kNoise);
  ComplexSeries out(n);
  for (auto& v : out) v = stream.next_cgauss(noise.sigma2);
  return out;
}

namespace detail {

// Sample-rate +/-1 envelope: symbols drawn i.i.d. equiprobable from the
// model's dedicated symbol stream, each held for `oversample` samples.
inline std::vector<double> bpsk_envelope(std::size_t n, const SignalModel& m) {
  RandomStream symbols(m.symbol_seed, StreamRole::kSymbols);
  std::vector<double> env(n);
  const std::size_t os = m.oversample;
  double cur = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k % os == 0) cur = double(symbols.sign());
    env[k] = cur;
  }
  return env;
}

}  // namespace detail

// Deterministic synthesis of one transmission model.
//
// Carrier/chirp sample k: A * exp(i*2*pi*((d*k + f0)*k + phase)); every
// sample has magnitude exactly A. BPSK multiplies the carrier by a held
// +/-1 symbol stream; windowed BPSK first smooths that stream with a
// Hamming window of length `oversample` and rescales the envelope so its
// mean power over the generated span equals A^2.
inline ComplexSeries gen_signal(std::size_t n, const SignalModel& m) {
  if (n < 1) throw InvalidArgumentError("gen_signal: n must be >= 1");
  validate(m);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  ComplexSeries out(n);
  switch (m.kind) {
    case SignalKind::kCarrier:
    case SignalKind::kChirp: {
      const double d = (m.kind == SignalKind::kCarrier) ? 0.0 : m.drift;
      for (std::size_t k = 0; k < n; ++k) {
        const double kk = double(k);
        // Work in cycles and reduce mod 1 before the 2*pi multiply: the
        // quadratic term can reach ~1e5 cycles at full series length.
        const double cycles = (d * kk + m.f0) * kk + m.phase;
        const double a = kTwoPi * (cycles - std::floor(cycles));
        out[k] = m.amplitude * std::complex<double>(std::cos(a), std::sin(a));
      }
      break;
    }
    case SignalKind::kBpsk: {
      const auto env = detail::bpsk_envelope(n, m);
      for (std::size_t k = 0; k < n; ++k) {
        const double cycles = m.f0 * double(k) + m.phase;
        const double a = kTwoPi * (cycles - std::floor(cycles));
        out[k] = env[k] * m.amplitude * std::complex<double>(std::cos(a), std::sin(a));
      }
      break;
    }
    case SignalKind::kWindowedBpsk: {
      const auto raw = detail::bpsk_envelope(n, m);
      const auto w = hamming_window(m.oversample);
      // Causal FIR pass of the window over the +/-1 stream.
      std::vector<double> env(n, 0.0);
      double power = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        const std::size_t jmax = std::min<std::size_t>(k + 1, w.size());
        for (std::size_t j = 0; j < jmax; ++j) acc += w[j] * raw[k - j];
        env[k] = acc;
        power += acc * acc;
      }
      power /= double(n);
      const double scale = m.amplitude / std::sqrt(power);
      for (std::size_t k = 0; k < n; ++k) {
        const double cycles = m.f0 * double(k) + m.phase;
        const double a = kTwoPi * (cycles - std::floor(cycles));
        out[k] = env[k] * scale * std::complex<double>(std::cos(a), std::sin(a));
      }
      break;
    }
  }
  return out;
}

// Per-trial randomization of the transmission parameters:
// f0 ~ U[0,1], d ~ U[-2/n, 2/n], phase ~ U[0,1]; deterministic in
// (master_seed, trial_index).
inline TrialParams sample_trial_params(std::uint64_t master_seed,
                                       std::uint64_t trial_index, std::size_t n) {
  if (n < 2) throw InvalidArgumentError("sample_trial_params: n must be >= 2");
  RandomStream stream(master_seed, StreamRole::kTrialParams, trial_index);
  TrialParams p;
  p.f0 = stream.uniform01();
  p.drift = stream.uniform(-2.0 / double(n), 2.0 / double(n));
  p.phase = stream.uniform01();
  return p;
}

// One hypothesis-test data set. H0 when no model is given (noise only);
// H1 adds the model sample-wise with its amplitude set from the target
// SNR = A^2/sigma^2 (snr_db = 10*log10(SNR)).
inline ComplexSeries make_trial(std::size_t n, const std::optional<SignalModel>& model,
                                const NoiseModel& noise, double snr_db = 0.0) {
  ComplexSeries x = gen_noise(n, noise);
  if (!model) return x;
  detail::require_finite(snr_db, "snr_db");
  SignalModel m = *model;
  m.amplitude = std::sqrt(noise.sigma2) * std::pow(10.0, snr_db / 20.0);
  const ComplexSeries s = gen_signal(n, m);
  for (std::size_t k = 0; k < n; ++k) x[k] += s[k];
  return x;
}

}  // namespace setidet
