#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "setidet/detectors.hpp"
#include "setidet/errors.hpp"
#include "setidet/parallel.hpp"
#include "setidet/rng.hpp"
#include "setidet/signal.hpp"

// Empirical threshold calibration and detection/false-alarm rate
// estimation. No closed-form null distribution exists for the max-type
// statistics, so gamma is always the upper empirical quantile of
// simulated H0 statistics:
//
//   gamma = k-th order statistic of `trials` H0 values,
//   k = ceil((1 - pfa) * trials), no interpolation.
//
// Every trial's randomness derives from (seed, purpose tag, trial index),
// so calibration, held-out estimation, and H1 trials use disjoint noise
// streams and the outcome is independent of evaluation order.

namespace setidet {

// Seed-derivation tags for the independent stages.
namespace seed_tag {
inline constexpr std::uint64_t kCalibration = 0x11;
inline constexpr std::uint64_t kEstimation = 0x22;
inline constexpr std::uint64_t kRocH0 = 0x33;
inline constexpr std::uint64_t kSymbols = 0x44;
}  // namespace seed_tag

struct RatePoint {
  double probability = 0.0;
  double ci_low = 0.0;   // 95% Wilson interval
  double ci_high = 0.0;
  std::uint64_t trials = 0;

  bool operator==(const RatePoint&) const = default;
};

// Wilson score interval; z defaults to the two-sided 95% quantile.
inline RatePoint wilson_rate(std::uint64_t hits, std::uint64_t trials,
                             double z = 1.959963984540054) {
  if (trials == 0) throw InvalidArgumentError("wilson_rate: zero trials");
  const double n = double(trials);
  const double p = double(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // clamp so the interval always brackets the point estimate
  const double lo = std::min(p, std::max(0.0, center - half));
  const double hi = std::max(p, std::min(1.0, center + half));
  return {p, lo, hi, trials};
}

inline std::uint64_t min_calibration_trials(double pfa) {
  return std::uint64_t(std::ceil(10.0 / pfa));
}

// H0 statistics for a batch of detector specs over shared trial series.
// stats[s][t] is detector s on trial t; calling this with a single spec
// or with many yields identical per-spec values for the same seed.
inline std::vector<std::vector<double>> h0_statistics(
    std::span<const DetectorSpec> specs, std::size_t n, const NoiseModel& noise,
    std::uint64_t trials, std::uint64_t seed, unsigned workers = 1,
    std::uint64_t tag = seed_tag::kCalibration) {
  validate(noise);
  std::vector<std::vector<double>> stats(specs.size(), std::vector<double>(trials));
  parallel_for(trials, workers, [&](std::uint64_t t) {
    NoiseModel trial_noise{noise.sigma2, derive_seed(seed, tag, t)};
    const ComplexSeries x = gen_noise(n, trial_noise);
    for (std::size_t s = 0; s < specs.size(); ++s)
      stats[s][t] = evaluate(specs[s], x).value;
  });
  return stats;
}

// Upper empirical quantile with the conservative no-interpolation rule.
inline double empirical_threshold(std::vector<double> values, double pfa) {
  if (!(pfa > 0.0 && pfa < 1.0))
    throw InvalidArgumentError("threshold: pfa must be in (0, 1)");
  if (values.empty()) throw InsufficientTrialsError("threshold: no values");
  // the 1e-9 guard keeps representation noise in (1-pfa)*trials from
  // tipping ceil() across an exact integer boundary
  std::uint64_t k =
      std::uint64_t(std::ceil((1.0 - pfa) * double(values.size()) - 1e-9));
  k = std::min<std::uint64_t>(std::max<std::uint64_t>(k, 1), values.size());
  const std::size_t idx = std::size_t(k) - 1;
  std::nth_element(values.begin(), values.begin() + idx, values.end());
  return values[idx];
}

inline std::vector<double> calibrate_thresholds(std::span<const DetectorSpec> specs,
                                                std::size_t n, const NoiseModel& noise,
                                                double pfa, std::uint64_t trials,
                                                std::uint64_t seed,
                                                unsigned workers = 1) {
  if (!(pfa > 0.0 && pfa < 1.0))
    throw InvalidArgumentError("calibrate: pfa must be in (0, 1)");
  if (trials < min_calibration_trials(pfa))
    throw InsufficientTrialsError(
        "calibrate: need at least " + std::to_string(min_calibration_trials(pfa)) +
        " trials for pfa=" + std::to_string(pfa) + ", got " + std::to_string(trials));
  auto stats = h0_statistics(specs, n, noise, trials, seed, workers);
  std::vector<double> gammas(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s)
    gammas[s] = empirical_threshold(std::move(stats[s]), pfa);
  return gammas;
}

inline double calibrate_threshold(const DetectorSpec& spec, std::size_t n,
                                  const NoiseModel& noise, double pfa,
                                  std::uint64_t trials, std::uint64_t seed,
                                  unsigned workers = 1) {
  return calibrate_thresholds(std::span(&spec, 1), n, noise, pfa, trials, seed,
                              workers)[0];
}

// One H1 (or H0 when `model` is absent) trial series. Transmission
// parameters are re-drawn per trial (f0, phase always; drift for chirps;
// a fresh BPSK symbol stream), then the model rides on independent noise
// at the requested SNR.
inline ComplexSeries make_indexed_trial(std::size_t n,
                                        const std::optional<SignalModel>& model,
                                        const NoiseModel& noise, double snr_db,
                                        std::uint64_t seed, std::uint64_t trial,
                                        std::uint64_t tag = seed_tag::kEstimation) {
  NoiseModel trial_noise{noise.sigma2, derive_seed(seed, tag, trial)};
  if (!model) return make_trial(n, std::nullopt, trial_noise, snr_db);
  SignalModel m = *model;
  const TrialParams p = sample_trial_params(seed, trial, n);
  m.f0 = p.f0;
  m.phase = p.phase;
  m.drift = (m.kind == SignalKind::kChirp) ? p.drift : 0.0;
  if (m.kind == SignalKind::kBpsk || m.kind == SignalKind::kWindowedBpsk)
    m.symbol_seed = derive_seed(seed, seed_tag::kSymbols, trial);
  return make_trial(n, m, trial_noise, snr_db);
}

// Fraction of trials whose statistic exceeds gamma, with 95% Wilson CI.
inline RatePoint estimate_rate(const DetectorSpec& spec, double gamma, std::size_t n,
                               const NoiseModel& noise,
                               const std::optional<SignalModel>& model, double snr_db,
                               std::uint64_t trials, std::uint64_t seed,
                               unsigned workers = 1) {
  if (trials < 100)
    throw InsufficientTrialsError("estimate_rate: need >= 100 trials");
  validate(noise);
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, workers, [&](std::uint64_t t) {
    const ComplexSeries x = make_indexed_trial(n, model, noise, snr_db, seed, t);
    hit[t] = evaluate(spec, x).value > gamma ? 1 : 0;
  });
  std::uint64_t hits = 0;
  for (auto h : hit) hits += h;
  return wilson_rate(hits, trials);
}

// Operating characteristic traced by sweeping gamma over the pooled H0
// order statistics (plus a sentinel below all of them, so Pfa reaches 1).
inline std::vector<std::pair<double, double>> roc_curve(
    const DetectorSpec& spec, std::size_t n, const NoiseModel& noise,
    const SignalModel& model, double snr_db, std::uint64_t trials,
    std::uint64_t seed, unsigned workers = 1) {
  if (trials < 1000)
    throw InsufficientTrialsError("roc_curve: need >= 1000 trials");
  auto h0 = h0_statistics(std::span(&spec, 1), n, noise, trials, seed, workers,
                          seed_tag::kRocH0)[0];
  std::vector<double> h1(trials);
  parallel_for(trials, workers, [&](std::uint64_t t) {
    const ComplexSeries x = make_indexed_trial(n, model, noise, snr_db, seed, t);
    h1[t] = evaluate(spec, x).value;
  });
  std::sort(h0.begin(), h0.end());
  std::sort(h1.begin(), h1.end());
  const double below_all = h0.front() - 1.0;
  std::vector<std::pair<double, double>> curve;
  curve.reserve(trials + 1);
  auto exceed_frac = [](const std::vector<double>& sorted, double gamma) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), gamma);
    return double(sorted.end() - it) / double(sorted.size());
  };
  for (std::size_t i = 0; i <= h0.size(); ++i) {
    const double gamma = (i == 0) ? below_all : h0[i - 1];
    curve.emplace_back(exceed_frac(h0, gamma), exceed_frac(h1, gamma));
  }
  std::sort(curve.begin(), curve.end());
  curve.erase(std::unique(curve.begin(), curve.end()), curve.end());
  return curve;
}

}  // namespace setidet
