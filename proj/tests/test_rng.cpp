#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <set>

#include "setidet/rng.hpp"

using namespace setidet;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 v1.x kat_vectors, philox4x32 rounds=10.
  auto out = detail::Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = detail::Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  out = detail::Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                  {0xa4093822u, 0x299f31d0u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams are deterministic and role-disjoint") {
  RandomStream a(42, StreamRole::kNoise, 7);
  RandomStream b(42, StreamRole::kNoise, 7);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

  RandomStream c(42, StreamRole::kTrialParams, 7);
  RandomStream d(42, StreamRole::kNoise, 8);
  RandomStream e(43, StreamRole::kNoise, 7);
  RandomStream f(42, StreamRole::kNoise, 7);
  std::set<std::uint64_t> firsts{f.next_u64(), c.next_u64(), d.next_u64(),
                                 e.next_u64()};
  CHECK(firsts.size() == 4);
}

TEST_CASE("uniform01 lands in [0,1) with the right mean") {
  RandomStream s(1, StreamRole::kNoise);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);  // ~5.5 sigma
}

TEST_CASE("complex gaussian moments") {
  RandomStream s(123, StreamRole::kNoise);
  const int n = 200000;
  const double var = 3.0;
  std::complex<double> mean = 0.0, square = 0.0;
  double pow_acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = s.next_cgauss(var);
    mean += z;
    square += z * z;
    pow_acc += std::norm(z);
  }
  mean /= double(n);
  square /= double(n);
  pow_acc /= double(n);
  CHECK(std::abs(mean) < 5.0 * std::sqrt(var / n));
  CHECK(std::abs(pow_acc - var) < 5.0 * var / std::sqrt(double(n)));
  // circularity: E[z^2] = 0
  CHECK(std::abs(square) < 5.0 * var / std::sqrt(double(n)));
}

TEST_CASE("derive_seed separates tags and indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t tag = 0; tag < 8; ++tag)
    for (std::uint64_t idx = 0; idx < 64; ++idx)
      seen.insert(derive_seed(99, tag, idx));
  CHECK(seen.size() == 8 * 64);
  CHECK(derive_seed(99, 1, 2) == derive_seed(99, 1, 2));
  CHECK(derive_seed(99, 1, 2) != derive_seed(100, 1, 2));
}

TEST_CASE("sign is equiprobable") {
  RandomStream s(5, StreamRole::kSymbols);
  int pos = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) pos += s.sign() > 0 ? 1 : 0;
  CHECK(std::abs(pos - n / 2) < 5 * std::sqrt(n / 4.0));
}
