#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "setidet/signal.hpp"

using namespace setidet;
using cdouble = std::complex<double>;

TEST_CASE("gen_noise is deterministic and rejects bad input") {
  const NoiseModel noise{1.0, 987};
  const auto a = gen_noise(4, noise);
  const auto b = gen_noise(4, noise);
  REQUIRE(a == b);
  CHECK_THROWS_AS(gen_noise(0, noise), InvalidArgumentError);
  CHECK_THROWS_AS(gen_noise(4, NoiseModel{0.0, 1}), InvalidArgumentError);
  CHECK_THROWS_AS(gen_noise(4, NoiseModel{-1.0, 1}), InvalidArgumentError);
}

TEST_CASE("gen_noise moments: mean, variance, circularity") {
  const std::size_t n = 100000;
  const auto x = gen_noise(n, NoiseModel{2.0, 314159});
  cdouble mean = 0.0, square = 0.0;
  double var = 0.0;
  for (const auto& v : x) {
    mean += v;
    square += v * v;
    var += std::norm(v);
  }
  mean /= double(n);
  square /= double(n);
  var /= double(n);
  CHECK(std::abs(mean) <= 0.03);
  CHECK(var >= 1.94);
  CHECK(var <= 2.06);
  CHECK(std::abs(square) <= 0.03);  // circularity: E[x^2] = 0
}

TEST_CASE("gen_noise energy concentration at sigma2 = 1") {
  const std::size_t n = 100000;
  const auto x = gen_noise(n, NoiseModel{1.0, 2718});
  double e = 0.0;
  for (const auto& v : x) e += std::norm(v);
  e /= double(n);
  CHECK(e >= 0.985);
  CHECK(e <= 1.015);
}

TEST_CASE("carrier at zero frequency is constant") {
  SignalModel m;
  m.kind = SignalKind::kCarrier;
  m.amplitude = 1.0;
  const auto x = gen_signal(3, m);
  for (const auto& v : x) {
    CHECK(v.real() == Catch::Approx(1.0).margin(1e-15));
    CHECK(v.imag() == Catch::Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("chirp phase law evaluated by hand") {
  // d = 0.25: cycles(k) = 0.25*k^2, so samples are [1, i, 1]
  SignalModel m;
  m.kind = SignalKind::kChirp;
  m.amplitude = 1.0;
  m.drift = 0.25;
  const auto x = gen_signal(3, m);
  CHECK(std::abs(x[0] - cdouble(1, 0)) < 1e-12);
  CHECK(std::abs(x[1] - cdouble(0, 1)) < 1e-12);
  CHECK(std::abs(x[2] - cdouble(1, 0)) < 1e-12);
}

TEST_CASE("bpsk phase jumps by pi exactly at symbol boundaries") {
  SignalModel m;
  m.kind = SignalKind::kBpsk;
  m.amplitude = 1.0;
  m.f0 = 0.1375;
  m.phase = 0.3;
  m.oversample = 8;
  m.symbol_seed = 555;
  const std::size_t n = 64;
  const auto x = gen_signal(n, m);
  // sample-to-sample rotation is exp(i*2*pi*f0), negated when the symbol flips
  const cdouble step = std::polar(1.0, 2.0 * std::numbers::pi * m.f0);
  int flips = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const cdouble ratio = x[k + 1] / x[k];
    const bool same = std::abs(ratio - step) < 1e-9;
    const bool flipped = std::abs(ratio + step) < 1e-9;
    REQUIRE((same || flipped));
    if (flipped) {
      CHECK((k + 1) % m.oversample == 0);
      ++flips;
    }
  }
  CHECK(flips > 0);  // 8 symbols, a constant stream is astronomically unlikely
}

TEST_CASE("constant-modulus kinds have |sample| == A everywhere") {
  for (const auto kind : {SignalKind::kCarrier, SignalKind::kChirp, SignalKind::kBpsk}) {
    SignalModel m;
    m.kind = kind;
    m.amplitude = 2.5;
    m.f0 = 0.2345;
    m.drift = 1.7e-5;
    m.phase = 0.9;
    m.symbol_seed = 42;
    const auto x = gen_signal(4096, m);
    for (const auto& v : x) REQUIRE(std::abs(v) == Catch::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("mean power is calibrated to A^2 for every kind") {
  for (const auto kind : {SignalKind::kCarrier, SignalKind::kChirp, SignalKind::kBpsk,
                          SignalKind::kWindowedBpsk}) {
    SignalModel m;
    m.kind = kind;
    m.amplitude = 1.5;
    m.f0 = 0.77;
    m.drift = -3e-6;
    m.phase = 0.1;
    m.symbol_seed = 9;
    const std::size_t n = 4096;
    const auto x = gen_signal(n, m);
    double p = 0.0;
    for (const auto& v : x) p += std::norm(v);
    p /= double(n);
    INFO(to_string(kind));
    CHECK(p == Catch::Approx(2.25).epsilon(kind == SignalKind::kWindowedBpsk ? 1e-12
                                                                             : 0.02));
  }
}

TEST_CASE("windowed bpsk is smoother than raw bpsk") {
  SignalModel m;
  m.kind = SignalKind::kWindowedBpsk;
  m.amplitude = 1.0;
  m.oversample = 8;
  m.symbol_seed = 4;
  const auto x = gen_signal(512, m);
  // envelope varies: not constant-modulus
  double lo = 1e300, hi = 0.0;
  for (const auto& v : x) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  CHECK(hi > lo + 0.1);
}

TEST_CASE("gen_signal rejects nonfinite and invalid parameters") {
  SignalModel m;
  m.f0 = std::nan("");
  CHECK_THROWS_AS(gen_signal(8, m), InvalidArgumentError);
  m.f0 = 0.0;
  m.amplitude = -1.0;
  CHECK_THROWS_AS(gen_signal(8, m), InvalidArgumentError);
  m.amplitude = 1.0;
  m.oversample = 0;
  CHECK_THROWS_AS(gen_signal(8, m), InvalidArgumentError);
}

TEST_CASE("trial parameters: determinism, distribution, support") {
  const auto p1 = sample_trial_params(77, 13, 1 << 16);
  const auto p2 = sample_trial_params(77, 13, 1 << 16);
  CHECK(p1.f0 == p2.f0);
  CHECK(p1.drift == p2.drift);
  CHECK(p1.phase == p2.phase);

  const std::size_t n = 1 << 16;
  double f0_sum = 0.0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    const auto p = sample_trial_params(123, t, n);
    f0_sum += p.f0;
    REQUIRE(p.f0 >= 0.0);
    REQUIRE(p.f0 < 1.0);
    REQUIRE(p.phase >= 0.0);
    REQUIRE(p.phase < 1.0);
    REQUIRE(p.drift >= -2.0 / double(n));
    REQUIRE(p.drift <= 2.0 / double(n));
  }
  f0_sum /= 10000.0;
  CHECK(f0_sum >= 0.485);
  CHECK(f0_sum <= 0.515);
}

TEST_CASE("make_trial: H0 equals plain noise, H1 amplitude follows the SNR") {
  const NoiseModel noise{1.0, 31337};
  const auto h0 = make_trial(64, std::nullopt, noise);
  CHECK(h0 == gen_noise(64, noise));

  SignalModel m;
  m.kind = SignalKind::kCarrier;
  m.f0 = 0.25;

  // snr = 0 dB, sigma2 = 1 -> A = 1
  auto h1 = make_trial(64, m, noise, 0.0);
  for (std::size_t k = 0; k < 64; ++k) {
    const double a = std::abs(h1[k] - h0[k]);
    REQUIRE(a == Catch::Approx(1.0).epsilon(1e-12));
  }
  // snr = -10 dB -> A^2 = 0.1
  h1 = make_trial(64, m, noise, -10.0);
  for (std::size_t k = 0; k < 64; ++k) {
    const double a2 = std::norm(h1[k] - h0[k]);
    REQUIRE(a2 == Catch::Approx(0.1).epsilon(1e-12));
  }
}
