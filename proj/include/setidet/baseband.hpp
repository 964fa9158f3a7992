#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setidet/errors.hpp"
#include "setidet/signal.hpp"

// Recording format: a raw little-endian interleaved payload next to a JSON
// header sidecar named `<payload>.hdr.json`. Two sample formats:
//
//   cf32  interleaved float32 (re, im)
//   ci8   interleaved int8 (re, im), value v mapping to v/128 in [-1, 1)
//
// The reader streams samples in chunks so a recording never has to fit in
// memory at once.

namespace setidet {

static_assert(std::endian::native == std::endian::little,
              "baseband payloads are little-endian; big-endian hosts unsupported");

enum class SampleFormat { kCf32, kCi8 };

inline const char* to_string(SampleFormat f) {
  return f == SampleFormat::kCf32 ? "cf32" : "ci8";
}

inline SampleFormat sample_format_from_string(const std::string& s) {
  if (s == "cf32") return SampleFormat::kCf32;
  if (s == "ci8") return SampleFormat::kCi8;
  throw IoError("unknown sample format tag: '" + s + "'");
}

inline std::size_t bytes_per_sample(SampleFormat f) {
  return f == SampleFormat::kCf32 ? 8 : 2;
}

struct BasebandHeader {
  double sample_rate = 1.0;  // Hz
  double center_freq = 0.0;  // Hz
  SampleFormat format = SampleFormat::kCf32;
  std::uint64_t n_samples = 0;
  std::string description;
};

inline std::filesystem::path sidecar_path(const std::filesystem::path& payload) {
  std::filesystem::path p = payload;
  p += ".hdr.json";
  return p;
}

inline void write_baseband_header(const std::filesystem::path& payload,
                                  const BasebandHeader& h) {
  nlohmann::json j{{"sample_rate", h.sample_rate},
                   {"center_freq", h.center_freq},
                   {"format", to_string(h.format)},
                   {"n_samples", h.n_samples},
                   {"description", h.description}};
  std::ofstream out(sidecar_path(payload), std::ios::binary);
  if (!out) throw IoError("cannot write header " + sidecar_path(payload).string());
  out << j.dump(2) << "\n";
}

// Writes payload + sidecar. ci8 output clamps to [-1, 127/128] and rounds.
inline void write_baseband(const std::filesystem::path& payload, BasebandHeader header,
                           std::span<const std::complex<double>> samples) {
  header.n_samples = samples.size();
  if (header.sample_rate <= 0.0) throw InvalidArgumentError("sample_rate must be > 0");
  std::ofstream out(payload, std::ios::binary);
  if (!out) throw IoError("cannot write payload " + payload.string());
  if (header.format == SampleFormat::kCf32) {
    std::vector<float> buf(2 * samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      buf[2 * i] = float(samples[i].real());
      buf[2 * i + 1] = float(samples[i].imag());
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              std::streamsize(buf.size() * sizeof(float)));
  } else {
    auto quantize = [](double v) {
      const double scaled = std::round(v * 128.0);
      return std::int8_t(std::max(-128.0, std::min(127.0, scaled)));
    };
    std::vector<std::int8_t> buf(2 * samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      buf[2 * i] = quantize(samples[i].real());
      buf[2 * i + 1] = quantize(samples[i].imag());
    }
    out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  }
  if (!out) throw IoError("write failed for " + payload.string());
  out.close();
  write_baseband_header(payload, header);
}

class BasebandReader {
 public:
  explicit BasebandReader(const std::filesystem::path& payload) : path_(payload) {
    const auto side = sidecar_path(payload);
    std::ifstream hs(side, std::ios::binary);
    if (!hs) throw IoError("missing header sidecar " + side.string());
    nlohmann::json j;
    try {
      hs >> j;
      header_.sample_rate = j.at("sample_rate").get<double>();
      header_.center_freq = j.at("center_freq").get<double>();
      header_.format = sample_format_from_string(j.at("format").get<std::string>());
      header_.n_samples = j.at("n_samples").get<std::uint64_t>();
      header_.description = j.value("description", std::string{});
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed header " + side.string() + ": " + e.what());
    }
    if (header_.sample_rate <= 0.0)
      throw IoError("malformed header " + side.string() + ": sample_rate must be > 0");

    in_.open(payload, std::ios::binary);
    if (!in_) throw IoError("cannot open payload " + payload.string());
    const auto payload_bytes = std::filesystem::file_size(payload);
    const auto expected = header_.n_samples * bytes_per_sample(header_.format);
    if (payload_bytes != expected) {
      throw TruncatedPayloadError(
          "payload " + payload.string() + " holds " + std::to_string(payload_bytes) +
          " bytes but header declares " + std::to_string(header_.n_samples) +
          " samples (" + std::to_string(expected) + " bytes)");
    }
  }

  const BasebandHeader& header() const { return header_; }

  // Reads up to out.size() samples; returns the count (0 at end of stream).
  std::size_t read(std::span<std::complex<double>> out) {
    const std::uint64_t left = header_.n_samples - consumed_;
    const std::size_t want = std::size_t(std::min<std::uint64_t>(out.size(), left));
    if (want == 0) return 0;
    if (header_.format == SampleFormat::kCf32) {
      raw_f_.resize(2 * want);
      in_.read(reinterpret_cast<char*>(raw_f_.data()),
               std::streamsize(raw_f_.size() * sizeof(float)));
      if (std::size_t(in_.gcount()) != raw_f_.size() * sizeof(float))
        throw TruncatedPayloadError("short read on " + path_.string());
      for (std::size_t i = 0; i < want; ++i)
        out[i] = {double(raw_f_[2 * i]), double(raw_f_[2 * i + 1])};
    } else {
      raw_b_.resize(2 * want);
      in_.read(reinterpret_cast<char*>(raw_b_.data()), std::streamsize(raw_b_.size()));
      if (std::size_t(in_.gcount()) != raw_b_.size())
        throw TruncatedPayloadError("short read on " + path_.string());
      for (std::size_t i = 0; i < want; ++i)
        out[i] = {double(raw_b_[2 * i]) / 128.0, double(raw_b_[2 * i + 1]) / 128.0};
    }
    consumed_ += want;
    return want;
  }

  // Convenience for tests and small files.
  ComplexSeries read_all() {
    ComplexSeries all(header_.n_samples);
    std::size_t off = 0;
    while (off < all.size()) {
      const std::size_t got = read(std::span(all).subspan(off));
      if (got == 0) break;
      off += got;
    }
    all.resize(off);
    return all;
  }

 private:
  std::filesystem::path path_;
  BasebandHeader header_;
  std::ifstream in_;
  std::uint64_t consumed_ = 0;
  std::vector<float> raw_f_;
  std::vector<std::int8_t> raw_b_;
};

}  // namespace setidet
