// setidet — artificial-signal detection toolkit for single-receiver
// radio SETI experiments.
//
// Subcommands:
//   gen          synthesize a baseband recording (noise / carrier / chirp /
//                BPSK / windowed BPSK, optionally embedded in noise)
//   detect       run the detector set on a recording, one line per detector
//   calibrate    empirical H0 thresholds for a target false-alarm rate
//   bench        Monte Carlo Pd-vs-SNR benchmark (tables + plots)
//   spectrogram  channelize a recording and emit binarized spectrograms
//
// Exit status: 0 success, 1 usage error, 2 runtime failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "setidet/baseband.hpp"
#include "setidet/calibration.hpp"
#include "setidet/channelizer.hpp"
#include "setidet/detectors.hpp"
#include "setidet/manifest.hpp"
#include "setidet/parallel.hpp"
#include "setidet/pipeline.hpp"
#include "setidet/signal.hpp"
#include "setidet/sweep.hpp"
#include "setidet/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace setidet;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  unsigned workers = default_workers();
  std::string out_dir = ".";
  std::string config_path;
  json config;  // flat per-subcommand overrides

  // flags > config file > defaults
  template <typename T>
  void overlay(const CLI::Option* opt, const char* key, T& value) const {
    if (opt->count() == 0 && config.contains(key)) value = config.at(key).get<T>();
  }

  void load_config() {
    if (config_path.empty()) return;
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + config_path);
    try {
      in >> config;
    } catch (const json::exception& e) {
      throw IoError("malformed config " + config_path + ": " + e.what());
    }
  }
};

std::vector<double> parse_snr_spec(const std::string& spec) {
  // either "lo:step:hi" or a comma list
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    const auto parts = setidet::detail::split(spec, ':');
    if (parts.size() != 3) throw InvalidArgumentError("--snr expects lo:step:hi");
    const double lo = setidet::detail::parse_double(parts[0]);
    const double step = setidet::detail::parse_double(parts[1]);
    const double hi = setidet::detail::parse_double(parts[2]);
    if (step <= 0.0) throw InvalidArgumentError("--snr step must be > 0");
    for (int k = 0;; ++k) {
      const double v = lo + step * k;
      if (v > hi + 1e-9) break;
      grid.push_back(v);
    }
  } else {
    for (const auto& tok : setidet::detail::split(spec, ','))
      grid.push_back(setidet::detail::parse_double(tok));
  }
  return grid;
}

std::vector<std::uint32_t> parse_channel_ranges(const std::string& spec) {
  // "2-40,90-126,5"
  std::vector<std::uint32_t> channels;
  for (const auto& tok : setidet::detail::split(spec, ',')) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) {
      channels.push_back(std::uint32_t(std::stoul(tok)));
    } else {
      const auto lo = std::stoul(tok.substr(0, dash));
      const auto hi = std::stoul(tok.substr(dash + 1));
      if (hi < lo) throw InvalidArgumentError("bad channel range: " + tok);
      for (auto c = lo; c <= hi; ++c) channels.push_back(std::uint32_t(c));
    }
  }
  return channels;
}

std::vector<DetectorSpec> parse_detector_list(const std::vector<std::string>& names) {
  std::vector<DetectorSpec> specs;
  for (const auto& n : names) specs.push_back(DetectorSpec::parse(n));
  return specs;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string kind = "noise";
  std::uint64_t n = 4096;
  double sigma2 = 1.0;
  double amplitude = 1.0;
  double f0 = 0.0, drift = 0.0, phase = 0.0;
  std::uint32_t oversample = 8;
  std::uint64_t symbol_seed = 0;
  std::optional<double> snr_db;
  std::string format = "cf32";
  double sample_rate = 1.0, center_freq = 0.0;
  std::string description;
  std::string out;
};

int run_gen(const GlobalOpts& g, const GenArgs& a) {
  if (a.n < 1) throw InvalidArgumentError("gen: --n must be >= 1");
  const auto started = iso8601_now();
  const auto t0 = std::chrono::steady_clock::now();

  ComplexSeries samples;
  if (a.kind == "noise") {
    samples = gen_noise(a.n, NoiseModel{a.sigma2, g.seed});
  } else {
    SignalModel model;
    model.kind = signal_kind_from_string(a.kind);
    model.amplitude = a.amplitude;
    model.f0 = a.f0;
    model.drift = a.drift;
    model.phase = a.phase;
    model.oversample = a.oversample;
    model.symbol_seed = a.symbol_seed ? a.symbol_seed
                                      : derive_seed(g.seed, seed_tag::kSymbols);
    if (a.snr_db) {
      samples = make_trial(a.n, model, NoiseModel{a.sigma2, g.seed}, *a.snr_db);
    } else {
      samples = gen_signal(a.n, model);
    }
  }

  BasebandHeader header;
  header.sample_rate = a.sample_rate;
  header.center_freq = a.center_freq;
  header.format = sample_format_from_string(a.format);
  header.description = a.description;
  const fs::path payload = a.out;
  if (payload.has_parent_path()) fs::create_directories(payload.parent_path());
  write_baseband(payload, header, samples);

  RunManifest m;
  m.subcommand = "gen";
  m.master_seed = g.seed;
  m.config = json{{"kind", a.kind},       {"n", a.n},
                  {"sigma2", a.sigma2},   {"amplitude", a.amplitude},
                  {"f0", a.f0},           {"drift", a.drift},
                  {"phase", a.phase},     {"oversample", a.oversample},
                  {"symbol_seed", a.symbol_seed},
                  {"format", a.format},   {"sample_rate", a.sample_rate},
                  {"center_freq", a.center_freq}, {"seed", g.seed},
                  {"out", a.out}};
  if (a.snr_db) m.config["snr_db"] = *a.snr_db;
  m.started = started;
  m.finished = iso8601_now();
  m.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.outputs = {payload, sidecar_path(payload)};
  fs::path manifest = payload;
  manifest += ".manifest.json";
  write_manifest(m, manifest);
  std::cout << "wrote " << payload.string() << " (" << a.n << " samples, " << a.format
            << ")\n";
  return 0;
}

// --- detect ------------------------------------------------------------------

int run_detect(const GlobalOpts&, const std::string& input,
               const std::vector<std::string>& detector_names) {
  BasebandReader reader(input);
  const ComplexSeries x = reader.read_all();
  std::vector<DetectorSpec> specs = detector_names.empty()
                                        ? default_detectors()
                                        : parse_detector_list(detector_names);
  std::cout << "# " << input << ": n=" << x.size()
            << " sample_rate=" << reader.header().sample_rate << "\n";
  std::cout << "# detector value argmax wall_ms\n";
  for (const auto& spec : specs) {
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const DetectionStatistic stat = evaluate(spec, x);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      std::cout << spec.name() << " " << setidet::detail::format_double(stat.value)
                << " " << (stat.argmax ? std::to_string(*stat.argmax) : "-") << " "
                << setidet::detail::format_double(ms) << "\n";
    } catch (const InvalidArgumentError& e) {
      std::cerr << "skipping " << spec.name() << ": " << e.what() << "\n";
    }
  }
  return 0;
}

// --- calibrate ---------------------------------------------------------------

struct CalibrateArgs {
  std::uint64_t n = std::size_t(1) << 16;
  double sigma2 = 1.0;
  double pfa = 0.01;
  std::uint64_t trials = 0;  // 0 -> max(1000, ceil(10/pfa))
  std::vector<std::string> detectors;
  std::string out = "thresholds.json";
};

int run_calibrate(const GlobalOpts& g, const CalibrateArgs& a) {
  const auto started = iso8601_now();
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t trials =
      a.trials ? a.trials : std::max<std::uint64_t>(1000, min_calibration_trials(a.pfa));
  std::vector<DetectorSpec> specs = a.detectors.empty()
                                        ? default_detectors()
                                        : parse_detector_list(a.detectors);
  const auto gammas = calibrate_thresholds(specs, a.n, NoiseModel{a.sigma2, 0}, a.pfa,
                                           trials, g.seed, g.workers);

  json entries = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    entries.push_back({{"detector", specs[i].name()},
                       {"n", a.n},
                       {"sigma2", a.sigma2},
                       {"gamma", gammas[i]}});
  }
  json table{{"pfa", a.pfa},
             {"trials", trials},
             {"master_seed", g.seed},
             {"entries", entries}};
  fs::create_directories(g.out_dir);
  const fs::path out_path = fs::path(g.out_dir) / a.out;
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + out_path.string());
    out << table.dump(2) << "\n";
  }

  RunManifest m;
  m.subcommand = "calibrate";
  m.master_seed = g.seed;
  m.config = json{{"n", a.n},       {"sigma2", a.sigma2}, {"pfa", a.pfa},
                  {"trials", trials}, {"seed", g.seed},
                  {"detectors", json::array()}};
  for (const auto& s : specs) m.config["detectors"].push_back(s.name());
  m.started = started;
  m.finished = iso8601_now();
  m.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.outputs = {out_path};
  write_manifest(m, fs::path(g.out_dir) / "manifest.json");
  std::cout << "wrote " << out_path.string() << " (" << specs.size() << " detectors, "
            << trials << " trials)\n";
  return 0;
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
  std::uint64_t n = std::size_t(1) << 16;
  std::uint64_t trials = 1000;
  std::uint64_t calibration_trials = 0;
  double pfa = 0.01;
  double sigma2 = 1.0;
  std::string snr_spec;
  std::vector<std::string> models;
  std::vector<std::string> detectors;
  bool quick = false;
};

json bench_config_json(const SweepConfig& c) {
  json models = json::array();
  for (const auto& m : c.models) models.push_back(to_string(m));
  json detectors = json::array();
  for (const auto& d : c.detectors) detectors.push_back(d.name());
  return json{{"n", c.n},
              {"trials", c.trials},
              {"calibration_trials", c.calibration_trials},
              {"pfa", c.pfa},
              {"sigma2", c.sigma2},
              {"snr_grid_db", c.snr_grid_db},
              {"models", models},
              {"detectors", detectors},
              {"seed", c.master_seed}};
}

int run_bench(const GlobalOpts& g, const BenchArgs& a, bool n_given, bool trials_given) {
  const auto started = iso8601_now();
  SweepConfig config = SweepConfig::defaults();
  config.master_seed = g.seed;
  config.workers = g.workers;
  if (a.quick) config.apply_quick_preset();
  // explicit flags / config-file values override the preset
  if (n_given) config.n = a.n;
  if (trials_given) config.trials = a.trials;
  config.calibration_trials = a.calibration_trials;
  config.pfa = a.pfa;
  config.sigma2 = a.sigma2;
  if (!a.snr_spec.empty()) config.snr_grid_db = parse_snr_spec(a.snr_spec);
  if (!a.models.empty()) {
    config.models.clear();
    for (const auto& m : a.models) config.models.push_back(signal_kind_from_string(m));
  }
  if (!a.detectors.empty()) config.detectors = parse_detector_list(a.detectors);

  const SweepResult result = run_sweep(config);

  fs::create_directories(g.out_dir);
  const fs::path dir(g.out_dir);
  std::vector<fs::path> outputs;
  emit_table(result, dir / "sweep.csv");
  outputs.push_back(dir / "sweep.csv");
  for (const auto& model : config.models) {
    const fs::path p = dir / (std::string(to_string(model)) + ".svg");
    emit_plot(result, model, p);
    outputs.push_back(p);
  }

  std::uint64_t failed = 0;
  for (const auto& r : result.records) failed += r.error.empty() ? 0 : 1;

  RunManifest m;
  m.subcommand = "bench";
  m.master_seed = g.seed;
  m.config = bench_config_json(config);
  m.started = started;
  m.finished = iso8601_now();
  m.runtime_seconds = result.runtime_seconds;
  m.outputs = outputs;
  write_manifest(m, dir / "manifest.json");

  std::cout << "sweep: " << result.records.size() << " records ("
            << config.models.size() << " models x " << config.snr_grid_db.size()
            << " SNR x " << config.detectors.size() << " detectors), "
            << setidet::detail::format_double(result.runtime_seconds) << " s";
  if (failed) std::cout << ", " << failed << " failed records";
  std::cout << "\nwrote " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

// --- spectrogram ---------------------------------------------------------------

struct SpectrogramArgs {
  std::string input;
  std::uint32_t channels = 128;
  std::uint32_t block_len = 1024;
  double pfa = 0.01;
  std::vector<std::string> detectors;  // default: energy, max_KLT, perio_8
  std::string empty_ranges;
  std::string threshold_mode = "auto";  // auto | global | per-channel
  bool window = false;
  std::uint64_t psd_frames = 0;
};

int run_spectrogram(const GlobalOpts& g, const SpectrogramArgs& a) {
  const auto started = iso8601_now();
  const auto t0 = std::chrono::steady_clock::now();

  BasebandReader reader(a.input);
  const BasebandHeader header = reader.header();
  Channelizer ch([&](std::span<std::complex<double>> out) { return reader.read(out); },
                 a.channels, a.block_len, a.window);
  std::vector<ChannelizedBlock> blocks;
  while (auto b = ch.next()) blocks.push_back(std::move(*b));
  if (blocks.empty())
    throw InvalidArgumentError("spectrogram: input shorter than one block");

  std::vector<DetectorSpec> specs =
      a.detectors.empty()
          ? std::vector<DetectorSpec>{DetectorSpec::energy(), DetectorSpec::klt(64),
                                      DetectorSpec::periodogram(8)}
          : parse_detector_list(a.detectors);
  std::vector<std::uint32_t> empty_channels;
  if (!a.empty_ranges.empty()) empty_channels = parse_channel_ranges(a.empty_ranges);

  fs::create_directories(g.out_dir);
  const fs::path dir(g.out_dir);
  std::vector<fs::path> outputs;

  // PSD diagnostic over the requested number of frames (0 = all).
  {
    const auto psd = estimate_psd(blocks, a.psd_frames);
    const fs::path p = dir / "psd.csv";
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    out << "channel,freq_hz,power\n";
    for (std::size_t c = 0; c < psd.size(); ++c) {
      // FFT bin c maps to baseband offset c/N (wrapped to [-1/2, 1/2)).
      double frac = double(c) / double(a.channels);
      if (frac >= 0.5) frac -= 1.0;
      out << c << ',' << setidet::detail::format_double(
                             header.center_freq + frac * header.sample_rate)
          << ',' << setidet::detail::format_double(psd[c]) << "\n";
    }
    outputs.push_back(p);
  }

  for (const auto& spec : specs) {
    // Scale-invariant statistics default to one global empty-band
    // threshold; energy-like ones default to per-channel history to ride
    // out the band-edge roll-off.
    const bool scale_invariant =
        spec.kind == DetectorKind::kKlt || spec.kind == DetectorKind::kTimeLag;
    std::string mode = a.threshold_mode;
    if (mode == "auto") mode = scale_invariant ? "global" : "per-channel";

    std::vector<double> thresholds;
    if (mode == "global") {
      if (empty_channels.empty())
        throw InvalidArgumentError(
            "spectrogram: global threshold mode needs --empty channel ranges");
      thresholds = {calibrate_empty_bands(blocks, empty_channels, spec, a.pfa,
                                          g.workers)};
    } else if (mode == "per-channel") {
      thresholds = calibrate_per_channel(blocks, spec, a.pfa, g.workers);
    } else {
      throw InvalidArgumentError("spectrogram: bad threshold mode '" + mode + "'");
    }

    BinarySpectrogram sg = binarize(blocks, spec, thresholds, a.pfa, g.workers);
    sg.sample_rate = header.sample_rate;
    sg.center_freq = header.center_freq;
    const fs::path stem = dir / spec.name();
    emit_spectrogram(sg, stem);
    for (const char* ext : {".pgm", ".csv", ".json"}) {
      fs::path p = stem;
      p += ext;
      outputs.push_back(p);
    }
    std::uint64_t ones = 0;
    for (auto v : sg.grid) ones += v;
    std::cout << spec.name() << ": " << sg.n_blocks << "x" << sg.n_channels
              << " grid, " << mode << " threshold, detection rate "
              << setidet::detail::format_double(double(ones) / double(sg.grid.size()))
              << "\n";
  }

  RunManifest m;
  m.subcommand = "spectrogram";
  m.master_seed = g.seed;
  m.config = json{{"input", a.input},
                  {"channels", a.channels},
                  {"block_len", a.block_len},
                  {"pfa", a.pfa},
                  {"empty", a.empty_ranges},
                  {"threshold_mode", a.threshold_mode},
                  {"window", a.window},
                  {"psd_frames", a.psd_frames},
                  {"seed", g.seed},
                  {"detectors", json::array()}};
  for (const auto& s : specs) m.config["detectors"].push_back(s.name());
  m.started = started;
  m.finished = iso8601_now();
  m.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.outputs = outputs;
  write_manifest(m, dir / "manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"setidet — artificial-signal detection toolkit"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", kVersion);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master seed for all randomness");
  app.add_option("--workers", g.workers, "worker thread count (results identical for any value)");
  app.add_option("--out-dir", g.out_dir, "output directory");
  app.add_option("--config", g.config_path, "JSON file with per-subcommand defaults");

  auto* g_seed = app.get_option("--seed");
  auto* g_workers = app.get_option("--workers");

  // gen
  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "synthesize a baseband recording");
  gen->add_option("--kind", gen_args.kind,
                  "noise|carrier|chirp|bpsk|bpsk_windowed")
      ->check(CLI::IsMember({"noise", "carrier", "chirp", "bpsk", "bpsk_windowed"}));
  gen->add_option("--n", gen_args.n, "sample count");
  gen->add_option("--sigma2", gen_args.sigma2, "noise power");
  gen->add_option("--amplitude", gen_args.amplitude, "signal amplitude A");
  gen->add_option("--f0", gen_args.f0, "carrier frequency [cycles/sample]");
  gen->add_option("--drift", gen_args.drift, "chirp rate d [cycles/sample^2]");
  gen->add_option("--phase", gen_args.phase, "initial phase [cycles]");
  gen->add_option("--oversample", gen_args.oversample, "samples per BPSK symbol");
  gen->add_option("--symbol-seed", gen_args.symbol_seed, "BPSK symbol stream seed");
  auto* gen_snr = gen->add_option("--snr", gen_args.snr_db,
                                  "embed the signal in noise at this SNR [dB]");
  gen->add_option("--format", gen_args.format, "cf32|ci8")
      ->check(CLI::IsMember({"cf32", "ci8"}));
  gen->add_option("--sample-rate", gen_args.sample_rate, "header sample rate [Hz]");
  gen->add_option("--center-freq", gen_args.center_freq, "header center frequency [Hz]");
  gen->add_option("--description", gen_args.description, "header description");
  gen->add_option("--out", gen_args.out, "payload output path")->required();

  // detect
  std::string detect_input;
  std::vector<std::string> detect_detectors;
  auto* detect = app.add_subcommand("detect", "run detectors on a recording");
  detect->add_option("--input", detect_input, "baseband payload path")->required();
  detect->add_option("--detector", detect_detectors,
                     "detector spec (repeatable; default: full benchmark set)");

  // calibrate
  CalibrateArgs cal_args;
  auto* calibrate = app.add_subcommand("calibrate", "calibrate H0 thresholds");
  auto* cal_n = calibrate->add_option("--n", cal_args.n, "series length");
  auto* cal_sigma2 = calibrate->add_option("--sigma2", cal_args.sigma2, "noise power");
  auto* cal_pfa = calibrate->add_option("--pfa", cal_args.pfa, "target false-alarm rate");
  auto* cal_trials = calibrate->add_option("--trials", cal_args.trials, "H0 trials");
  calibrate->add_option("--detector", cal_args.detectors, "detector spec (repeatable)");
  calibrate->add_option("--out", cal_args.out, "threshold table file name");

  // bench
  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Monte Carlo Pd-vs-SNR benchmark");
  auto* b_n = bench->add_option("--n", bench_args.n, "series length per trial");
  auto* b_trials = bench->add_option("--trials", bench_args.trials, "trials per SNR point");
  auto* b_cal = bench->add_option("--calibration-trials", bench_args.calibration_trials,
                                  "H0 calibration trials (0 = auto)");
  auto* b_pfa = bench->add_option("--pfa", bench_args.pfa, "target false-alarm rate");
  auto* b_sigma2 = bench->add_option("--sigma2", bench_args.sigma2, "noise power");
  auto* b_snr = bench->add_option("--snr", bench_args.snr_spec,
                                  "SNR grid: lo:step:hi or comma list [dB]");
  auto* b_models = bench->add_option("--models", bench_args.models,
                                     "signal models (comma/repeat)");
  auto* b_dets = bench->add_option("--detectors", bench_args.detectors,
                                   "detector specs (comma/repeat)");
  bench->add_flag("--quick", bench_args.quick, "desk-scale preset: n=2^12, 200 trials");

  // spectrogram
  SpectrogramArgs sg_args;
  auto* sg = app.add_subcommand("spectrogram",
                                "channelize + binarized detection spectrograms");
  sg->add_option("--input", sg_args.input, "baseband payload path")->required();
  auto* sg_ch = sg->add_option("--channels", sg_args.channels, "channel count (power of two)");
  auto* sg_bl = sg->add_option("--block-len", sg_args.block_len,
                               "channelized samples per spectrogram cell");
  auto* sg_pfa = sg->add_option("--pfa", sg_args.pfa, "target false-alarm rate");
  sg->add_option("--detector", sg_args.detectors,
                 "detector spec (repeatable; default energy,max_KLT,perio_8)");
  auto* sg_empty = sg->add_option("--empty", sg_args.empty_ranges,
                                  "empty channel ranges, e.g. 2-40,90-126");
  sg->add_option("--threshold-mode", sg_args.threshold_mode, "auto|global|per-channel")
      ->check(CLI::IsMember({"auto", "global", "per-channel"}));
  sg->add_flag("--window", sg_args.window, "Hamming window per channelizer frame");
  sg->add_option("--psd-frames", sg_args.psd_frames, "frames for the PSD estimate (0 = all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    g.load_config();
    g.overlay(g_seed, "seed", g.seed);
    g.overlay(g_workers, "workers", g.workers);
    if (g.workers < 1) g.workers = 1;

    if (gen->parsed()) {
      if (gen_snr->count() == 0 && g.config.contains("snr_db"))
        gen_args.snr_db = g.config.at("snr_db").get<double>();
      return run_gen(g, gen_args);
    }
    if (detect->parsed()) return run_detect(g, detect_input, detect_detectors);
    if (calibrate->parsed()) {
      g.overlay(cal_n, "n", cal_args.n);
      g.overlay(cal_sigma2, "sigma2", cal_args.sigma2);
      g.overlay(cal_pfa, "pfa", cal_args.pfa);
      g.overlay(cal_trials, "trials", cal_args.trials);
      return run_calibrate(g, cal_args);
    }
    if (bench->parsed()) {
      g.overlay(b_n, "n", bench_args.n);
      g.overlay(b_trials, "trials", bench_args.trials);
      g.overlay(b_cal, "calibration_trials", bench_args.calibration_trials);
      g.overlay(b_pfa, "pfa", bench_args.pfa);
      g.overlay(b_sigma2, "sigma2", bench_args.sigma2);
      if (b_snr->count() == 0 && g.config.contains("snr_grid_db")) {
        const auto grid = g.config.at("snr_grid_db").get<std::vector<double>>();
        std::string spec;
        for (std::size_t i = 0; i < grid.size(); ++i)
          spec += (i ? "," : "") + setidet::detail::format_double(grid[i]);
        bench_args.snr_spec = spec;
      }
      if (b_models->count() == 0 && g.config.contains("models"))
        bench_args.models = g.config.at("models").get<std::vector<std::string>>();
      if (b_dets->count() == 0 && g.config.contains("detectors"))
        bench_args.detectors = g.config.at("detectors").get<std::vector<std::string>>();
      const bool n_given = b_n->count() > 0 || g.config.contains("n");
      const bool trials_given = b_trials->count() > 0 || g.config.contains("trials");
      return run_bench(g, bench_args, n_given, trials_given);
    }
    if (sg->parsed()) {
      g.overlay(sg_ch, "channels", sg_args.channels);
      g.overlay(sg_bl, "block_len", sg_args.block_len);
      g.overlay(sg_pfa, "pfa", sg_args.pfa);
      if (sg_empty->count() == 0 && g.config.contains("empty"))
        sg_args.empty_ranges = g.config.at("empty").get<std::string>();
      return run_spectrogram(g, sg_args);
    }
    std::cout << app.help() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
