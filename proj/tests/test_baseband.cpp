#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "setidet/baseband.hpp"
#include "setidet/signal.hpp"

using namespace setidet;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "setidet_baseband_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("cf32 payload round-trips bitwise") {
  const auto x = gen_noise(16, NoiseModel{1.0, 44});
  const auto path = temp_dir() / "rt.cf32";
  BasebandHeader h;
  h.sample_rate = 3e6;
  h.center_freq = 1.42e9;
  h.description = "round trip";
  write_baseband(path, h, x);

  BasebandReader reader(path);
  CHECK(reader.header().sample_rate == 3e6);
  CHECK(reader.header().center_freq == 1.42e9);
  CHECK(reader.header().n_samples == 16);
  CHECK(reader.header().description == "round trip");
  const auto back = reader.read_all();
  REQUIRE(back.size() == 16);
  // values pass through float32 exactly once; a rewrite is bit-identical
  const auto path2 = temp_dir() / "rt2.cf32";
  write_baseband(path2, h, back);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("ci8 endpoint mapping") {
  const auto path = temp_dir() / "m.ci8";
  {
    std::ofstream out(path, std::ios::binary);
    const std::int8_t raw[] = {-128, 127, 0, 64};
    out.write(reinterpret_cast<const char*>(raw), 4);
  }
  BasebandHeader h;
  h.format = SampleFormat::kCi8;
  h.n_samples = 2;
  write_baseband_header(path, h);
  BasebandReader reader(path);
  const auto x = reader.read_all();
  REQUIRE(x.size() == 2);
  CHECK(x[0].real() == -1.0);
  CHECK(x[0].imag() == Catch::Approx(127.0 / 128.0));
  CHECK(x[1].real() == 0.0);
  CHECK(x[1].imag() == 0.5);
}

TEST_CASE("truncated payload is rejected with both counts") {
  const auto x = gen_noise(8, NoiseModel{1.0, 45});
  const auto path = temp_dir() / "trunc.cf32";
  write_baseband(path, BasebandHeader{}, x);
  // shrink the payload behind the header's back
  fs::resize_file(path, 8 * 8 - 4);
  try {
    BasebandReader reader(path);
    FAIL("expected TruncatedPayloadError");
  } catch (const TruncatedPayloadError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("60") != std::string::npos);  // actual bytes
    CHECK(msg.find("8 samples") != std::string::npos);
    CHECK(msg.find("64") != std::string::npos);  // expected bytes
  }
}

TEST_CASE("missing, malformed and unknown headers") {
  const auto orphan = temp_dir() / "orphan.cf32";
  std::ofstream(orphan, std::ios::binary) << "data";
  CHECK_THROWS_AS(BasebandReader(orphan), IoError);

  const auto bad = temp_dir() / "bad.cf32";
  std::ofstream(bad, std::ios::binary) << "";
  std::ofstream(sidecar_path(bad), std::ios::binary) << "{not json";
  CHECK_THROWS_AS(BasebandReader(bad), IoError);

  const auto unk = temp_dir() / "unk.cf32";
  std::ofstream(unk, std::ios::binary) << "";
  std::ofstream(sidecar_path(unk), std::ios::binary)
      << R"({"sample_rate":1.0,"center_freq":0.0,"format":"cf64","n_samples":0})";
  CHECK_THROWS_AS(BasebandReader(unk), IoError);
}

TEST_CASE("chunked streaming equals a single read") {
  const auto x = gen_noise(1000, NoiseModel{2.0, 46});
  const auto path = temp_dir() / "chunks.cf32";
  write_baseband(path, BasebandHeader{}, x);

  BasebandReader whole(path);
  const auto all = whole.read_all();

  BasebandReader chunked(path);
  ComplexSeries acc;
  std::vector<std::complex<double>> buf(77);
  for (;;) {
    const auto got = chunked.read(buf);
    if (got == 0) break;
    acc.insert(acc.end(), buf.begin(), buf.begin() + std::ptrdiff_t(got));
  }
  CHECK(acc == all);
  REQUIRE(acc.size() == 1000);
}
