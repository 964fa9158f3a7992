#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "setidet/baseband.hpp"
#include "setidet/sha256.hpp"
#include "setidet/signal.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("SETIDET_CLI");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int status = -1;
  std::string out;
};

// run the binary, capture combined stdout+stderr
RunResult run(const std::string& args) {
  const auto out_file = fs::temp_directory_path() / "setidet_cli_out.txt";
  const std::string cmd = cli_path() + " " + args + " > " + out_file.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.status = WEXITSTATUS(rc);
  std::ifstream in(out_file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("--help lists every subcommand and exits 0") {
  const auto r = run("--help");
  CHECK(r.status == 0);
  for (const char* sub : {"gen", "detect", "calibrate", "bench", "spectrogram"})
    CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("unknown flag exits 1 and names the flag") {
  const auto r = run("bench --bogus-flag");
  CHECK(r.status == 1);
  CHECK(r.out.find("--bogus-flag") != std::string::npos);
}

TEST_CASE("gen writes a recording that detect can read") {
  const auto dir = temp_dir("setidet_cli_gen");
  const auto payload = dir / "sig.cf32";
  const auto g = run("gen --kind carrier --n 4096 --f0 0.125 --amplitude 2 --out " +
                     payload.string());
  REQUIRE(g.status == 0);
  REQUIRE(fs::exists(payload));
  REQUIRE(fs::exists(setidet::sidecar_path(payload)));
  REQUIRE(fs::exists(payload.string() + ".manifest.json"));

  const auto d = run("detect --input " + payload.string());
  REQUIRE(d.status == 0);
  // one line per detector with value and argmax
  for (const char* name : {"energy", "perio_1", "perio_ham_64", "time_lag", "max_KLT"})
    CHECK(d.out.find(name) != std::string::npos);
  // pure carrier at amplitude 2: energy = 4, printed in shortest form
  CHECK(d.out.find("energy 4 ") != std::string::npos);
}

TEST_CASE("detect on a truncated recording exits 2 with a diagnostic") {
  const auto dir = temp_dir("setidet_cli_trunc");
  const auto payload = dir / "t.cf32";
  const auto g = run("gen --kind noise --n 64 --out " + payload.string());
  REQUIRE(g.status == 0);
  fs::resize_file(payload, 64 * 8 - 8);
  const auto d = run("detect --input " + payload.string());
  CHECK(d.status == 2);
  CHECK(d.out.find("declares") != std::string::npos);
  CHECK(d.out.find("64") != std::string::npos);
}

TEST_CASE("calibrate emits a threshold table") {
  const auto dir = temp_dir("setidet_cli_cal");
  const auto r = run("--seed 5 --out-dir " + dir.string() +
                     " calibrate --n 512 --pfa 0.05 --trials 400 "
                     "--detector energy --detector perio_8");
  REQUIRE(r.status == 0);
  std::ifstream in(dir / "thresholds.json");
  REQUIRE(in);
  json table;
  in >> table;
  CHECK(table.at("pfa").get<double>() == 0.05);
  CHECK(table.at("trials").get<int>() == 400);
  CHECK(table.at("master_seed").get<int>() == 5);
  REQUIRE(table.at("entries").size() == 2);
  CHECK(table["entries"][0].at("detector") == "energy");
  CHECK(table["entries"][0].at("n").get<int>() == 512);
  CHECK(table["entries"][0].at("gamma").get<double>() > 0.0);
}

TEST_CASE("bench is reproducible and reconstructible from its manifest") {
  const auto dir1 = temp_dir("setidet_cli_bench1");
  const auto dir2 = temp_dir("setidet_cli_bench2");
  const std::string args =
      " bench --n 512 --trials 100 --calibration-trials 150 --pfa 0.1 "
      "--snr -12,-3 --models carrier --detectors energy,perio_8";
  const auto r1 = run("--seed 7 --workers 1 --out-dir " + dir1.string() + args);
  REQUIRE(r1.status == 0);
  const auto r2 = run("--seed 7 --workers 3 --out-dir " + dir2.string() + args);
  REQUIRE(r2.status == 0);

  const auto d1 = setidet::sha256_file_hex(dir1 / "sweep.csv");
  const auto d2 = setidet::sha256_file_hex(dir2 / "sweep.csv");
  CHECK(d1 == d2);
  CHECK(fs::exists(dir1 / "carrier.svg"));

  // manifest digests match the files on disk
  json manifest;
  std::ifstream(dir1 / "manifest.json") >> manifest;
  for (const auto& out : manifest.at("outputs")) {
    const auto path = dir1 / out.at("path").get<std::string>();
    CHECK(setidet::sha256_file_hex(path) == out.at("sha256").get<std::string>());
  }

  // re-run purely from the manifest's config: identical outputs
  const auto dir3 = temp_dir("setidet_cli_bench3");
  const auto cfg = dir3 / "config.json";
  std::ofstream(cfg) << manifest.at("config").dump();
  const auto r3 = run("--config " + cfg.string() + " --out-dir " + dir3.string() +
                      " bench");
  REQUIRE(r3.status == 0);
  CHECK(setidet::sha256_file_hex(dir3 / "sweep.csv") == d1);
}

TEST_CASE("spectrogram produces outputs for each detector") {
  const auto dir = temp_dir("setidet_cli_sg");
  const auto payload = dir / "rec.cf32";
  // 16 channels x 64-sample blocks x 20 blocks of noise
  const auto g = run("--seed 3 gen --kind noise --n " + std::to_string(16 * 64 * 20) +
                     " --out " + payload.string());
  REQUIRE(g.status == 0);
  const auto s = run("--out-dir " + dir.string() + " spectrogram --input " +
                     payload.string() +
                     " --channels 16 --block-len 64 --pfa 0.05 --empty 0-15 "
                     "--detector max_KLT --detector perio_8 --threshold-mode global");
  REQUIRE(s.status == 0);
  for (const char* stem : {"max_KLT", "perio_8"}) {
    CHECK(fs::exists(dir / (std::string(stem) + ".pgm")));
    CHECK(fs::exists(dir / (std::string(stem) + ".csv")));
    CHECK(fs::exists(dir / (std::string(stem) + ".json")));
  }
  CHECK(fs::exists(dir / "psd.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("spectrogram global mode without empty ranges exits 2") {
  const auto dir = temp_dir("setidet_cli_sg2");
  const auto payload = dir / "rec.cf32";
  const auto g = run("gen --kind noise --n 2048 --out " + payload.string());
  REQUIRE(g.status == 0);
  const auto s = run("--out-dir " + dir.string() + " spectrogram --input " +
                     payload.string() +
                     " --channels 16 --block-len 64 --threshold-mode global");
  CHECK(s.status == 2);
  CHECK(s.out.find("--empty") != std::string::npos);
}
