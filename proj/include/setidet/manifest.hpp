#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setidet/errors.hpp"
#include "setidet/sha256.hpp"
#include "setidet/version.hpp"

// Every batch run emits one manifest: the fully resolved configuration,
// seed, timestamps, and a digest of every output file, which is enough to
// reproduce the run exactly.

namespace setidet {

struct RunManifest {
  std::string subcommand;
  nlohmann::json config;  // resolved effective configuration
  std::uint64_t master_seed = 0;
  std::string started;
  std::string finished;
  double runtime_seconds = 0.0;
  // (path, sha256, bytes) per emitted file
  std::vector<std::filesystem::path> outputs;
};

inline std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& p : m.outputs) {
    outputs.push_back({{"path", p.filename().string()},
                       {"sha256", sha256_file_hex(p)},
                       {"bytes", std::filesystem::file_size(p)}});
  }
  nlohmann::json j{{"tool", "setidet"},
                   {"version", kVersion},
                   {"subcommand", m.subcommand},
                   {"master_seed", m.master_seed},
                   {"config", m.config},
                   {"started", m.started},
                   {"finished", m.finished},
                   {"runtime_seconds", m.runtime_seconds},
                   {"outputs", outputs}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_manifest: cannot open " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write_manifest: write failed for " + path.string());
}

}  // namespace setidet
