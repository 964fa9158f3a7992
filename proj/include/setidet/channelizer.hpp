#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "setidet/errors.hpp"
#include "setidet/fft.hpp"
#include "setidet/signal.hpp"
#include "setidet/window.hpp"

// Critically sampled transform channelizer: consecutive frames of
// n_channels input samples are (optionally Hamming-windowed and)
// DFT-transformed; bin c of frame t becomes sample t of channel c. The
// DFT is the unnormalized forward transform, so per-frame Parseval reads
// sum_c |X_c|^2 = n_channels * sum_n |x_n|^2. Frame outputs are grouped
// into blocks of block_len per channel, the unit the detection stage
// consumes. A trailing partial frame or block is dropped.

namespace setidet {

struct ChannelizedBlock {
  std::uint32_t n_channels = 0;
  std::uint32_t block_len = 0;
  std::uint64_t block_index = 0;
  std::vector<std::complex<double>> data;  // data[c * block_len + t]

  std::span<const std::complex<double>> channel(std::uint32_t c) const {
    return std::span(data).subspan(std::size_t(c) * block_len, block_len);
  }
};

class Channelizer {
 public:
  // `source` fills a span with samples and returns the count (0 = end).
  using Source = std::function<std::size_t(std::span<std::complex<double>>)>;

  Channelizer(Source source, std::uint32_t n_channels, std::uint32_t block_len,
              bool windowed = false)
      : source_(std::move(source)),
        n_channels_(n_channels),
        block_len_(block_len),
        fft_(Fft::plan(n_channels)) {
    if (n_channels < 2 || (n_channels & (n_channels - 1)) != 0)
      throw InvalidArgumentError("channelize: n_channels must be a power of two >= 2");
    if (block_len < 1) throw InvalidArgumentError("channelize: block_len must be >= 1");
    if (windowed) window_ = hamming_window(n_channels);
    frame_.resize(n_channels);
  }

  std::optional<ChannelizedBlock> next() {
    ChannelizedBlock block;
    block.n_channels = n_channels_;
    block.block_len = block_len_;
    block.block_index = next_index_;
    block.data.assign(std::size_t(n_channels_) * block_len_, {});
    for (std::uint32_t t = 0; t < block_len_; ++t) {
      std::size_t have = 0;
      while (have < n_channels_) {
        const std::size_t got =
            source_(std::span(frame_).subspan(have, n_channels_ - have));
        if (got == 0) {
          if (next_index_ == 0 && t == 0)
            throw InvalidArgumentError("channelize: stream shorter than one frame");
          return std::nullopt;  // partial block dropped
        }
        have += got;
      }
      if (!window_.empty())
        for (std::uint32_t i = 0; i < n_channels_; ++i) frame_[i] *= window_[i];
      fft_.forward(frame_.data());
      for (std::uint32_t c = 0; c < n_channels_; ++c)
        block.data[std::size_t(c) * block_len_ + t] = frame_[c];
    }
    ++next_index_;
    return block;
  }

 private:
  Source source_;
  std::uint32_t n_channels_;
  std::uint32_t block_len_;
  const Fft& fft_;
  std::vector<double> window_;
  std::vector<std::complex<double>> frame_;
  std::uint64_t next_index_ = 0;
};

// Fully channelize an in-memory series (tests, synthetic recordings).
inline std::vector<ChannelizedBlock> channelize_all(const ComplexSeries& samples,
                                                    std::uint32_t n_channels,
                                                    std::uint32_t block_len,
                                                    bool windowed = false) {
  std::size_t pos = 0;
  Channelizer ch(
      [&](std::span<std::complex<double>> out) {
        const std::size_t take = std::min(out.size(), samples.size() - pos);
        std::copy_n(samples.begin() + pos, take, out.begin());
        pos += take;
        return take;
      },
      n_channels, block_len, windowed);
  std::vector<ChannelizedBlock> blocks;
  while (auto b = ch.next()) blocks.push_back(std::move(*b));
  return blocks;
}

// Per-channel mean power, time-averaged over the first `max_frames`
// channelized frames (0 = all available). The (a)-panel diagnostic.
inline std::vector<double> estimate_psd(std::span<const ChannelizedBlock> blocks,
                                        std::uint64_t max_frames = 0) {
  if (blocks.empty()) throw InvalidArgumentError("estimate_psd: no blocks");
  const std::uint32_t n_channels = blocks.front().n_channels;
  std::vector<double> psd(n_channels, 0.0);
  std::uint64_t frames = 0;
  for (const auto& b : blocks) {
    if (b.n_channels != n_channels)
      throw InvalidArgumentError("estimate_psd: inconsistent channel counts");
    for (std::uint32_t t = 0; t < b.block_len; ++t) {
      if (max_frames && frames >= max_frames) break;
      for (std::uint32_t c = 0; c < n_channels; ++c)
        psd[c] += std::norm(b.data[std::size_t(c) * b.block_len + t]);
      ++frames;
    }
    if (max_frames && frames >= max_frames) break;
  }
  if (frames == 0) throw InvalidArgumentError("estimate_psd: no frames");
  for (auto& v : psd) v /= double(frames);
  return psd;
}

}  // namespace setidet
