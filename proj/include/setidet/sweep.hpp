#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "setidet/calibration.hpp"
#include "setidet/detectors.hpp"
#include "setidet/errors.hpp"
#include "setidet/signal.hpp"

// The Monte Carlo benchmark: Pd as a function of SNR for every
// (signal model, detector) pair at a fixed false-alarm probability.
// Thresholds are calibrated once per detector from shared H0 trials;
// each (model, snr) cell then evaluates all detectors on the same
// per-trial H1 series, with transmission parameters re-drawn per trial.

namespace setidet {

namespace seed_tag {
inline constexpr std::uint64_t kSweepCalibration = 0x51;
inline constexpr std::uint64_t kSweepCell = 0x52;
}  // namespace seed_tag

struct SweepConfig {
  std::size_t n = std::size_t(1) << 16;
  std::uint64_t trials = 1000;
  std::uint64_t calibration_trials = 0;  // 0 -> max(trials, ceil(10/pfa))
  double pfa = 0.01;
  double sigma2 = 1.0;
  std::vector<double> snr_grid_db;
  std::vector<SignalKind> models;
  std::vector<DetectorSpec> detectors;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;

  static std::vector<double> default_snr_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 20; ++k) g.push_back(-30.0 + 1.5 * k);
    return g;
  }

  // The full benchmark operating point: N = 2^16, 10^3 trials/SNR,
  // Pfa = 0.01, all four signal models, all nine detector
  // parameterizations.
  static SweepConfig defaults() {
    SweepConfig c;
    c.snr_grid_db = default_snr_grid();
    c.models = {SignalKind::kCarrier, SignalKind::kChirp, SignalKind::kBpsk,
                SignalKind::kWindowedBpsk};
    c.detectors = default_detectors();
    return c;
  }

  // Desk-scale profile for CI runs; does not match the full operating point.
  void apply_quick_preset() {
    n = std::size_t(1) << 12;
    trials = 200;
  }

  std::uint64_t effective_calibration_trials() const {
    return std::max<std::uint64_t>(calibration_trials ? calibration_trials : trials,
                                   min_calibration_trials(pfa));
  }

  void validate() const {
    if (n < 4) throw InvalidArgumentError("sweep: n must be >= 4");
    if (trials < 100) throw InvalidArgumentError("sweep: trials must be >= 100");
    if (!(pfa > 0.0 && pfa < 1.0))
      throw InvalidArgumentError("sweep: pfa must be in (0, 1)");
    if (sigma2 <= 0.0) throw InvalidArgumentError("sweep: sigma2 must be > 0");
    if (snr_grid_db.empty()) throw InvalidArgumentError("sweep: empty snr grid");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
      if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
        throw InvalidArgumentError("sweep: snr grid must be strictly increasing");
    if (models.empty()) throw InvalidArgumentError("sweep: no signal models");
    if (detectors.empty()) throw InvalidArgumentError("sweep: no detectors");
    for (const auto& d : detectors) {
      if (d.kind == DetectorKind::kPeriodogram &&
          (d.blocks == 0 || n % d.blocks != 0 || n / d.blocks < 2))
        throw InvalidArgumentError("sweep: n=" + std::to_string(n) +
                                   " not divisible into " + d.name() + " blocks");
      if (d.kind == DetectorKind::kKlt && std::size_t(d.dim) + 1 >= n)
        throw InvalidArgumentError("sweep: " + d.name() + " dimension too large");
    }
  }
};

struct SweepRecord {
  SignalKind model = SignalKind::kCarrier;
  DetectorSpec detector;
  double snr_db = 0.0;
  RatePoint rate;
  std::string error;  // non-empty: cell failed, rate is meaningless

  bool operator==(const SweepRecord&) const = default;
};

struct ThresholdTable {
  std::vector<DetectorSpec> specs;
  std::vector<double> gammas;  // parallel to specs
  std::size_t n = 0;
  double sigma2 = 1.0;
  double pfa = 0.01;
  std::uint64_t calibration_trials = 0;
  std::uint64_t master_seed = 0;

  double gamma_for(const DetectorSpec& spec) const {
    for (std::size_t i = 0; i < specs.size(); ++i)
      if (specs[i] == spec) return gammas[i];
    throw InvalidArgumentError("threshold table: no entry for " + spec.name());
  }
};

struct SweepResult {
  SweepConfig config;
  ThresholdTable thresholds;
  std::vector<SweepRecord> records;
  double runtime_seconds = 0.0;
};

inline SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const auto t_start = std::chrono::steady_clock::now();

  SweepResult result;
  result.config = config;

  const NoiseModel noise{config.sigma2, 0};
  const std::uint64_t cal_trials = config.effective_calibration_trials();
  result.thresholds.specs = config.detectors;
  result.thresholds.gammas = calibrate_thresholds(
      config.detectors, config.n, noise, config.pfa, cal_trials,
      derive_seed(config.master_seed, seed_tag::kSweepCalibration), config.workers);
  result.thresholds.n = config.n;
  result.thresholds.sigma2 = config.sigma2;
  result.thresholds.pfa = config.pfa;
  result.thresholds.calibration_trials = cal_trials;
  result.thresholds.master_seed = config.master_seed;

  const std::size_t n_det = config.detectors.size();
  for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
    for (std::size_t si = 0; si < config.snr_grid_db.size(); ++si) {
      const double snr_db = config.snr_grid_db[si];
      const std::uint64_t cell_index = mi * config.snr_grid_db.size() + si;
      const std::uint64_t cell_seed =
          derive_seed(config.master_seed, seed_tag::kSweepCell, cell_index);
      SignalModel model;
      model.kind = config.models[mi];

      std::vector<std::uint8_t> hits(n_det * config.trials, 0);
      std::string cell_error;
      try {
        parallel_for(config.trials, config.workers, [&](std::uint64_t t) {
          const ComplexSeries x = make_indexed_trial(config.n, model, noise, snr_db,
                                                     cell_seed, t);
          for (std::size_t d = 0; d < n_det; ++d) {
            hits[d * config.trials + t] =
                evaluate(config.detectors[d], x).value > result.thresholds.gammas[d]
                    ? 1
                    : 0;
          }
        });
      } catch (const std::exception& e) {
        cell_error = e.what();
      }
      for (std::size_t d = 0; d < n_det; ++d) {
        SweepRecord rec;
        rec.model = config.models[mi];
        rec.detector = config.detectors[d];
        rec.snr_db = snr_db;
        rec.error = cell_error;
        if (cell_error.empty()) {
          std::uint64_t h = 0;
          for (std::uint64_t t = 0; t < config.trials; ++t)
            h += hits[d * config.trials + t];
          rec.rate = wilson_rate(h, config.trials);
        }
        result.records.push_back(std::move(rec));
      }
    }
  }

  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

// --- CSV ---------------------------------------------------------------

namespace detail {

// Shortest representation that round-trips through parsing.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("bad numeric field: '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

inline constexpr const char* kSweepCsvHeader =
    "model,detector,snr_db,pd,ci_low,ci_high,trials";

// One row per successful record; failed cells are reported separately.
inline void emit_table(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("emit_table: cannot open " + path.string());
  out << kSweepCsvHeader << "\n";
  for (const auto& rec : result.records) {
    if (!rec.error.empty()) continue;
    out << to_string(rec.model) << ',' << rec.detector.name() << ','
        << detail::format_double(rec.snr_db) << ','
        << detail::format_double(rec.rate.probability) << ','
        << detail::format_double(rec.rate.ci_low) << ','
        << detail::format_double(rec.rate.ci_high) << ',' << rec.rate.trials << "\n";
  }
  if (!out) throw IoError("emit_table: write failed for " + path.string());
}

inline std::vector<SweepRecord> read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_table: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader)
    throw IoError("read_table: bad header in " + path.string());
  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 7) throw IoError("read_table: bad row: '" + line + "'");
    SweepRecord rec;
    rec.model = signal_kind_from_string(f[0]);
    rec.detector = DetectorSpec::parse(f[1]);
    rec.snr_db = detail::parse_double(f[2]);
    rec.rate.probability = detail::parse_double(f[3]);
    rec.rate.ci_low = detail::parse_double(f[4]);
    rec.rate.ci_high = detail::parse_double(f[5]);
    rec.rate.trials = std::stoull(f[6]);
    records.push_back(std::move(rec));
  }
  return records;
}

// --- SVG ---------------------------------------------------------------

// Fixed plot geometry, exposed so emitted files are machine-checkable.
namespace plot_geometry {
inline constexpr double kWidth = 840.0, kHeight = 560.0;
inline constexpr double kLeft = 70.0, kTop = 40.0;
inline constexpr double kPlotW = 580.0, kPlotH = 440.0;
}  // namespace plot_geometry

inline const std::vector<std::string>& plot_palette() {
  static const std::vector<std::string> colors = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors;
}

// Pd (y, 0..1) versus SNR dB (x); one polyline per detector with legend
// labels matching the detector parameterization names.
inline void emit_plot(const SweepResult& result, SignalKind model,
                      const std::filesystem::path& path) {
  using namespace plot_geometry;
  bool known = false;
  for (const auto& m : result.config.models) known = known || (m == model);
  if (!known)
    throw InvalidArgumentError(std::string("emit_plot: model not in sweep: ") +
                               to_string(model));

  const auto& grid = result.config.snr_grid_db;
  const double x_min = grid.front(), x_max = grid.back();
  const double x_span = (x_max > x_min) ? (x_max - x_min) : 1.0;
  auto x_of = [&](double snr) { return kLeft + (snr - x_min) / x_span * kPlotW; };
  auto y_of = [&](double pd) { return kTop + (1.0 - pd) * kPlotH; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << to_string(model) << " &#8212; Pd vs SNR (Pfa="
      << detail::format_double(result.config.pfa) << ")</text>\n";

  // axes + ticks
  svg << "<g stroke=\"#333\" fill=\"none\" stroke-width=\"1\">\n";
  svg << "<path d=\"M" << kLeft << " " << kTop << " V" << kTop + kPlotH << " H"
      << kLeft + kPlotW << "\"/>\n</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= 10; i += 2) {
    const double pd = i / 10.0;
    svg << "<text x=\"" << kLeft - 34 << "\" y=\"" << y_of(pd) + 4 << "\">"
        << detail::format_double(pd) << "</text>\n";
    svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y_of(pd) << "\" x2=\""
        << kLeft << "\" y2=\"" << y_of(pd) << "\" stroke=\"#333\"/>\n";
  }
  const int n_xticks = std::min<std::size_t>(grid.size(), 11);
  for (int i = 0; i < n_xticks; ++i) {
    const double snr =
        x_min + (n_xticks > 1 ? double(i) / (n_xticks - 1) : 0.0) * x_span;
    svg << "<text x=\"" << x_of(snr) - 10 << "\" y=\"" << kTop + kPlotH + 18 << "\">"
        << int(std::lround(snr)) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + kPlotW / 2 - 30 << "\" y=\"" << kTop + kPlotH + 40
      << "\">SNR [dB]</text>\n";
  svg << "<text x=\"14\" y=\"" << kTop + kPlotH / 2
      << "\" transform=\"rotate(-90 14 " << kTop + kPlotH / 2 << ")\">Pd</text>\n";
  svg << "</g>\n";

  const auto& palette = plot_palette();
  std::size_t li = 0;
  for (std::size_t d = 0; d < result.config.detectors.size(); ++d) {
    const auto& det = result.config.detectors[d];
    std::vector<std::pair<double, double>> pts;
    for (const auto& rec : result.records) {
      if (rec.model != model || !(rec.detector == det) || !rec.error.empty()) continue;
      pts.emplace_back(rec.snr_db, rec.rate.probability);
    }
    std::sort(pts.begin(), pts.end());
    if (pts.empty()) continue;
    const std::string& color = palette[d % palette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) svg << ' ';
      svg << detail::format_double(x_of(pts[i].first)) << ','
          << detail::format_double(y_of(pts[i].second));
    }
    svg << "\"/>\n";
    const double ly = kTop + 16.0 + 20.0 * double(li++);
    svg << "<line x1=\"" << kLeft + kPlotW + 14 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + kPlotW + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kLeft + kPlotW + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << det.name()
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("emit_plot: cannot open " + path.string());
  out << svg.str();
  if (!out) throw IoError("emit_plot: write failed for " + path.string());
}

}  // namespace setidet
