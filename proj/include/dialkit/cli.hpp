#pragma once

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dialkit/correction.hpp"
#include "dialkit/errors.hpp"
#include "dialkit/io.hpp"
#include "dialkit/metrics.hpp"
#include "dialkit/pipeline.hpp"
#include "dialkit/simulator.hpp"

namespace dialkit {

namespace cli_detail {

inline PayloadKind payload_kind_from_name(const std::string& name) {
  if (name == "class_scores") return PayloadKind::ClassScores;
  if (name == "value") return PayloadKind::Value;
  return PayloadKind::SinCos;
}

inline PipelineMode mode_from_name(const std::string& name) {
  if (name == "detection") return PipelineMode::Detection;
  if (name == "hybrid") return PipelineMode::Hybrid;
  return PipelineMode::Regression;
}

inline std::string meter_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "m%06zu", index);
  return std::string(buf);
}

struct SimulateArgs {
  std::size_t count = 10;
  std::string dials = "5";
  std::string payload = "sincos";
  double noise_sigma = 0.0;
  double flip_prob = 0.0;
  double drop_prob = 0.0;
  double dup_prob = 0.0;
  double tilt_max = 0.0;
  double boundary_weight = 0.5;
  std::uint64_t seed = 0;
  std::string out_detections;
  std::string out_gt;
};

inline void run_simulate(const SimulateArgs& args) {
  if (args.tilt_max < 0.0 || args.tilt_max > 45.0) {
    throw ValidationError("tilt-max", "must be in [0, 45]");
  }
  std::vector<MeterObservation> observations;
  std::vector<GroundTruthRecord> gt_records;
  for (std::size_t i = 0; i < args.count; ++i) {
    std::mt19937_64 rng(detail::derive_seed(args.seed, i, 0));
    int k = 5;
    if (args.dials == "4") {
      k = 4;
    } else if (args.dials == "mixed") {
      k = detail::uniform01(rng) < 0.5 ? 4 : 5;
    }
    MeterSpec spec;
    spec.image_id = meter_id(i);
    spec.dial_count = k;
    spec.consumption = sample_consumption(rng, k, args.boundary_weight);
    spec.tilt_deg = args.tilt_max > 0.0 ? (2.0 * detail::uniform01(rng) - 1.0) * args.tilt_max : 0.0;
    spec.payload_kind = payload_kind_from_name(args.payload);

    NoiseModel noise;
    noise.angle_sigma = args.noise_sigma;
    noise.flip_prob = args.flip_prob;
    noise.drop_prob = args.drop_prob;
    noise.dup_prob = args.dup_prob;
    noise.seed = detail::derive_seed(args.seed, i, 1);

    const SyntheticSample sample = generate(spec, noise);
    observations.push_back(sample.observation);

    GroundTruthRecord gt;
    gt.image_id = spec.image_id;
    gt.reading = sample.gt_reading;
    for (int d = 0; d < k; ++d) {
      const Point flat{spec.layout.counter_center.x +
                           (static_cast<double>(d) - (k - 1) / 2.0) * spec.layout.dial_pitch,
                       spec.layout.counter_center.y};
      const Point c = rotate_point(flat, spec.layout.counter_center, spec.tilt_deg);
      gt.dials.push_back({BBox{c.x, c.y, spec.layout.dial_box, spec.layout.dial_box},
                          sample.gt_values[static_cast<std::size_t>(d)].value()});
    }
    gt_records.push_back(std::move(gt));
  }
  write_detections(observations, args.out_detections);
  write_ground_truth(gt_records, args.out_gt);
}

struct ReadArgs {
  std::string detections;
  std::string mode = "regression";
  std::string thresholds_path;
  std::string out;
};

inline void run_read(const ReadArgs& args) {
  const CorrectionThresholds thresholds =
      args.thresholds_path.empty() ? default_thresholds() : parse_thresholds(args.thresholds_path);
  const PipelineMode mode = mode_from_name(args.mode);
  const auto parsed = parse_detections(args.detections);
  for (const auto& warning : parsed.warnings) std::cerr << "warning: " << warning << "\n";

  std::vector<PredictionRecord> predictions;
  for (const auto& obs : parsed.observations) {
    try {
      const Reading reading = assemble_reading(obs, mode, thresholds);
      PredictionRecord rec;
      rec.image_id = obs.image_id;
      rec.reading = reading.digits;
      for (const auto& v : reading.per_dial) rec.per_dial.push_back(v.value());
      rec.tilt_applied = reading.tilt_applied;
      rec.corrections_applied = reading.corrections_applied;
      rec.collinearity_warning = reading.collinearity_warning;
      rec.mode = args.mode;
      if (mode != PipelineMode::Detection) rec.thresholds = thresholds;
      predictions.push_back(std::move(rec));
    } catch (const UnsupportedDialCount& e) {
      throw Error("UnsupportedDialCount",
                  "image " + obs.image_id + ": dial count " + std::to_string(e.count()) +
                      " not in {4, 5} (partial digits \"" + e.partial_digits() + "\")");
    }
  }
  write_predictions(predictions, args.out);
}

struct CalibrateArgs {
  std::string detections;
  std::string gt;
  std::string grid_path;
  std::string out;
};

inline void run_calibrate(const CalibrateArgs& args) {
  const CalibrationGrid grid =
      args.grid_path.empty() ? default_grid() : parse_grid(args.grid_path);
  const auto parsed = parse_detections(args.detections);
  for (const auto& warning : parsed.warnings) std::cerr << "warning: " << warning << "\n";
  std::map<std::string, std::string> readings;
  for (const auto& rec : parse_ground_truth(args.gt)) {
    readings[rec.image_id] = rec.reading;
  }
  std::vector<CalibrationSample> samples;
  for (const auto& obs : parsed.observations) {
    const auto it = readings.find(obs.image_id);
    if (it == readings.end()) {
      throw ValidationError("image_id", "no ground truth for image " + obs.image_id);
    }
    samples.push_back({extract_dial_values(obs), it->second});
  }
  write_thresholds(calibrate(samples, grid), args.out);
}

struct EvaluateArgs {
  std::string pred;
  std::string gt;
  unsigned long long tolerance = 1;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
};

inline void run_evaluate(const EvaluateArgs& args) {
  const auto predictions = parse_predictions(args.pred);
  std::map<std::string, const PredictionRecord*> by_id;
  for (const auto& rec : predictions) {
    if (!by_id.emplace(rec.image_id, &rec).second) {
      throw ValidationError("image_id", "duplicate prediction for image " + rec.image_id);
    }
  }
  const auto gt_records = parse_ground_truth(args.gt);
  std::vector<ReadingPair> pairs;
  std::size_t matched = 0;
  for (const auto& gt : gt_records) {
    const auto it = by_id.find(gt.image_id);
    if (it == by_id.end()) {
      throw ValidationError("image_id", "no prediction for image " + gt.image_id);
    }
    ++matched;
    pairs.push_back({it->second->reading, gt.reading});
  }
  if (matched != by_id.size()) {
    throw ValidationError("image_id", "predictions contain images absent from ground truth");
  }

  const MetricsReport report = compute_report(pairs, {0, 1, args.tolerance});
  ReportConfig config;
  config.seed = args.seed;
  config.tolerance = args.tolerance;
  // Echo mode/thresholds when every prediction agrees on them.
  bool uniform_mode = !predictions.empty();
  bool uniform_thresholds = !predictions.empty();
  for (const auto& rec : predictions) {
    if (rec.mode.empty() || rec.mode != predictions.front().mode) uniform_mode = false;
    const bool same = rec.thresholds.has_value() == predictions.front().thresholds.has_value() &&
                      (!rec.thresholds ||
                       thresholds_to_json(*rec.thresholds) ==
                           thresholds_to_json(*predictions.front().thresholds));
    if (!same) uniform_thresholds = false;
  }
  if (uniform_mode) config.mode = predictions.front().mode;
  if (uniform_thresholds && predictions.front().thresholds) {
    config.thresholds = predictions.front().thresholds;
  }
  write_report(report, config, args.out,
               args.format == "csv" ? ReportFormat::Csv : ReportFormat::Json);
}

}  // namespace cli_detail

/// Command-line entry point. Exit codes: 0 success, 1 validation/parse/IO
/// errors, 2 usage errors. All randomness flows from --seed, so identical
/// inputs and seed produce byte-identical outputs.
inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Multi-dial meter reading toolkit: simulate, read, calibrate, evaluate"};
  app.require_subcommand(1);

  cli_detail::SimulateArgs sim;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Generate synthetic detections and ground truth");
  simulate_cmd->add_option("--count", sim.count, "Number of meters")->capture_default_str();
  simulate_cmd->add_option("--dials", sim.dials, "Dial count: 4, 5 or mixed")
      ->check(CLI::IsMember({"4", "5", "mixed"}))
      ->capture_default_str();
  simulate_cmd->add_option("--payload", sim.payload, "Payload kind per dial")
      ->check(CLI::IsMember({"class_scores", "value", "sincos"}))
      ->capture_default_str();
  simulate_cmd->add_option("--noise-sigma", sim.noise_sigma, "Angle jitter sigma, degrees")
      ->capture_default_str();
  simulate_cmd->add_option("--flip-prob", sim.flip_prob, "Symmetry flip probability")
      ->capture_default_str();
  simulate_cmd->add_option("--drop-prob", sim.drop_prob, "Dial drop probability")
      ->capture_default_str();
  simulate_cmd->add_option("--dup-prob", sim.dup_prob, "Duplicate detection probability")
      ->capture_default_str();
  simulate_cmd->add_option("--tilt-max", sim.tilt_max, "Tilt sampled uniformly in [-max, max]")
      ->capture_default_str();
  simulate_cmd->add_option("--boundary-weight", sim.boundary_weight,
                           "Share of pointer positions clustered near digits")
      ->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  simulate_cmd->add_option("--out-detections", sim.out_detections, "Detections JSONL output")
      ->required();
  simulate_cmd->add_option("--out-gt", sim.out_gt, "Ground-truth JSONL output")->required();

  cli_detail::ReadArgs read;
  auto* read_cmd = app.add_subcommand("read", "Assemble readings from detections");
  read_cmd->add_option("--detections", read.detections, "Detections JSONL input")->required();
  read_cmd->add_option("--mode", read.mode, "detection, regression or hybrid")
      ->check(CLI::IsMember({"detection", "regression", "hybrid"}))
      ->capture_default_str();
  read_cmd->add_option("--thresholds", read.thresholds_path,
                       "Correction thresholds JSON (defaults when omitted)");
  read_cmd->add_option("--out", read.out, "Predictions JSONL output")->required();

  cli_detail::CalibrateArgs cal;
  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "Search correction thresholds on a validation set");
  calibrate_cmd->add_option("--detections", cal.detections, "Detections JSONL input")->required();
  calibrate_cmd->add_option("--gt", cal.gt, "Ground-truth JSONL input")->required();
  calibrate_cmd->add_option("--grid", cal.grid_path,
                            "Candidate grid JSON (default lattice when omitted)");
  calibrate_cmd->add_option("--out", cal.out, "Thresholds JSON output")->required();

  cli_detail::EvaluateArgs eval;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate_cmd->add_option("--pred", eval.pred, "Predictions JSONL input")->required();
  evaluate_cmd->add_option("--gt", eval.gt, "Ground-truth JSONL input")->required();
  evaluate_cmd->add_option("--tolerance", eval.tolerance, "Extra kWh tolerance to report")
      ->capture_default_str();
  evaluate_cmd->add_option("--out", eval.out, "Report output")->required();
  evaluate_cmd->add_option("--format", eval.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--seed", eval.seed, "Seed echoed into the report config")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (simulate_cmd->parsed()) cli_detail::run_simulate(sim);
    if (read_cmd->parsed()) cli_detail::run_read(read);
    if (calibrate_cmd->parsed()) cli_detail::run_calibrate(cal);
    if (evaluate_cmd->parsed()) cli_detail::run_evaluate(eval);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help for the right scope, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
}

/// Convenience overload for in-process invocation.
inline int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace dialkit
