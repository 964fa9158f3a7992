#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setidet/calibration.hpp"
#include "setidet/channelizer.hpp"
#include "setidet/detectors.hpp"
#include "setidet/errors.hpp"
#include "setidet/parallel.hpp"
#include "setidet/sweep.hpp"

// The recorded-data workflow: after fine channelization, every
// (time block, channel) cell is a short complex series. Thresholds come
// from operator-declared empty channels (pooled empirical quantile, the
// same rule the simulation calibration uses), and each detector then
// yields a binarized time x frequency grid.

namespace setidet {

struct BinarySpectrogram {
  std::uint32_t n_channels = 0;
  std::uint32_t n_blocks = 0;
  std::uint32_t block_len = 0;
  DetectorSpec detector;
  double pfa = 0.0;
  std::vector<double> thresholds;   // size 1 (global) or n_channels
  std::vector<double> stats;        // [b * n_channels + c]
  std::vector<std::uint8_t> grid;   // same layout; 1 = detection
  // axis metadata
  double sample_rate = 1.0;         // input samples/s
  double center_freq = 0.0;

  double threshold_for(std::uint32_t c) const {
    return thresholds.size() == 1 ? thresholds[0] : thresholds.at(c);
  }
  double channel_width() const { return sample_rate / double(n_channels); }
  double block_seconds() const {
    return double(block_len) * double(n_channels) / sample_rate;
  }
};

namespace detail {

inline ComplexSeries cell_series(const ChannelizedBlock& b, std::uint32_t c) {
  const auto s = b.channel(c);
  return ComplexSeries(s.begin(), s.end());
}

}  // namespace detail

// Pools the detector statistic over all (block, empty-channel) cells and
// returns the empirical (1-pfa) upper order statistic.
inline double calibrate_empty_bands(std::span<const ChannelizedBlock> blocks,
                                    const std::vector<std::uint32_t>& empty_channels,
                                    const DetectorSpec& spec, double pfa,
                                    unsigned workers = 1) {
  if (empty_channels.empty())
    throw InvalidArgumentError("calibrate_empty_bands: empty channel set");
  if (!(pfa > 0.0 && pfa < 1.0))
    throw InvalidArgumentError("calibrate_empty_bands: pfa must be in (0, 1)");
  if (blocks.empty()) throw InvalidArgumentError("calibrate_empty_bands: no blocks");
  for (const auto c : empty_channels)
    if (c >= blocks.front().n_channels)
      throw InvalidArgumentError("calibrate_empty_bands: channel index out of range");
  const std::uint64_t available = blocks.size() * empty_channels.size();
  const std::uint64_t required = min_calibration_trials(pfa);
  if (available < required)
    throw InsufficientTrialsError(
        "calibrate_empty_bands: need >= " + std::to_string(required) +
        " pooled cells at pfa=" + std::to_string(pfa) + ", have " +
        std::to_string(available));

  std::vector<double> pool(available);
  parallel_for(available, workers, [&](std::uint64_t i) {
    const auto& block = blocks[i / empty_channels.size()];
    const std::uint32_t c = empty_channels[i % empty_channels.size()];
    pool[i] = evaluate(spec, detail::cell_series(block, c)).value;
  });
  return empirical_threshold(std::move(pool), pfa);
}

// Self-calibrated per-channel thresholds (each channel's own statistic
// history); handles band-edge roll-off, assumes transmissions are
// intermittent in time.
inline std::vector<double> calibrate_per_channel(
    std::span<const ChannelizedBlock> blocks, const DetectorSpec& spec, double pfa,
    unsigned workers = 1) {
  if (blocks.empty()) throw InvalidArgumentError("calibrate_per_channel: no blocks");
  const std::uint32_t n_channels = blocks.front().n_channels;
  if (blocks.size() < min_calibration_trials(pfa))
    throw InsufficientTrialsError(
        "calibrate_per_channel: need >= " + std::to_string(min_calibration_trials(pfa)) +
        " blocks at pfa=" + std::to_string(pfa) + ", have " +
        std::to_string(blocks.size()));
  std::vector<double> gammas(n_channels);
  parallel_for(n_channels, workers, [&](std::uint64_t c) {
    std::vector<double> vals(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
      vals[b] = evaluate(spec, detail::cell_series(blocks[b], std::uint32_t(c))).value;
    gammas[c] = empirical_threshold(std::move(vals), pfa);
  });
  return gammas;
}

// Applies the detector to every cell; grid[t][c] = stat > threshold(c).
inline BinarySpectrogram binarize(std::span<const ChannelizedBlock> blocks,
                                  const DetectorSpec& spec,
                                  std::span<const double> thresholds, double pfa,
                                  unsigned workers = 1) {
  if (blocks.empty()) throw InvalidArgumentError("binarize: no blocks");
  const std::uint32_t n_channels = blocks.front().n_channels;
  const std::uint32_t block_len = blocks.front().block_len;
  if (thresholds.size() != 1 && thresholds.size() != n_channels)
    throw InvalidArgumentError("binarize: need 1 or n_channels thresholds");
  if (spec.kind == DetectorKind::kPeriodogram && block_len % spec.blocks != 0)
    throw InvalidArgumentError("binarize: block_len " + std::to_string(block_len) +
                               " not divisible for " + spec.name());
  if (spec.kind == DetectorKind::kKlt && std::size_t(spec.dim) + 1 >= block_len)
    throw InvalidArgumentError("binarize: " + spec.name() +
                               " dimension too large for block_len " +
                               std::to_string(block_len));

  BinarySpectrogram sg;
  sg.n_channels = n_channels;
  sg.n_blocks = std::uint32_t(blocks.size());
  sg.block_len = block_len;
  sg.detector = spec;
  sg.pfa = pfa;
  sg.thresholds.assign(thresholds.begin(), thresholds.end());
  sg.stats.assign(std::size_t(sg.n_blocks) * n_channels, 0.0);
  sg.grid.assign(sg.stats.size(), 0);

  parallel_for(sg.stats.size(), workers, [&](std::uint64_t i) {
    const std::uint32_t b = std::uint32_t(i / n_channels);
    const std::uint32_t c = std::uint32_t(i % n_channels);
    const double v = evaluate(spec, detail::cell_series(blocks[b], c)).value;
    sg.stats[i] = v;
    sg.grid[i] = v > (sg.thresholds.size() == 1 ? sg.thresholds[0] : sg.thresholds[c])
                     ? 1
                     : 0;
  });
  return sg;
}

// Emits <stem>.pgm (binary grid, P5, width = channels), <stem>.csv
// (statistic grid) and <stem>.json (detector, thresholds, axes).
inline void emit_spectrogram(const BinarySpectrogram& sg,
                             const std::filesystem::path& stem) {
  {
    std::filesystem::path p = stem;
    p += ".pgm";
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("emit_spectrogram: cannot open " + p.string());
    out << "P5\n" << sg.n_channels << " " << sg.n_blocks << "\n255\n";
    std::vector<std::uint8_t> row(sg.n_channels);
    for (std::uint32_t b = 0; b < sg.n_blocks; ++b) {
      for (std::uint32_t c = 0; c < sg.n_channels; ++c)
        row[c] = sg.grid[std::size_t(b) * sg.n_channels + c] ? 255 : 0;
      out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw IoError("emit_spectrogram: write failed for " + p.string());
  }
  {
    std::filesystem::path p = stem;
    p += ".csv";
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("emit_spectrogram: cannot open " + p.string());
    for (std::uint32_t b = 0; b < sg.n_blocks; ++b) {
      for (std::uint32_t c = 0; c < sg.n_channels; ++c) {
        if (c) out << ',';
        out << detail::format_double(sg.stats[std::size_t(b) * sg.n_channels + c]);
      }
      out << '\n';
    }
    if (!out) throw IoError("emit_spectrogram: write failed for " + p.string());
  }
  {
    std::filesystem::path p = stem;
    p += ".json";
    nlohmann::json j{{"detector", sg.detector.name()},
                     {"pfa", sg.pfa},
                     {"thresholds", sg.thresholds},
                     {"n_channels", sg.n_channels},
                     {"n_blocks", sg.n_blocks},
                     {"block_len", sg.block_len},
                     {"sample_rate", sg.sample_rate},
                     {"center_freq", sg.center_freq},
                     {"channel_width", sg.channel_width()},
                     {"block_seconds", sg.block_seconds()}};
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("emit_spectrogram: cannot open " + p.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("emit_spectrogram: write failed for " + p.string());
  }
}

// Parses the statistic grid back (round-trip checks, post-hoc rebinarization).
inline std::vector<double> read_statistic_csv(const std::filesystem::path& path,
                                              std::uint32_t n_channels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_statistic_csv: cannot open " + path.string());
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != n_channels)
      throw IoError("read_statistic_csv: bad row width in " + path.string());
    for (const auto& f : fields) vals.push_back(detail::parse_double(f));
  }
  return vals;
}

}  // namespace setidet
