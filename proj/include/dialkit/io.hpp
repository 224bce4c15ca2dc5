#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dialkit/correction.hpp"
#include "dialkit/errors.hpp"
#include "dialkit/metrics.hpp"
#include "dialkit/pipeline.hpp"

namespace dialkit {

using ojson = nlohmann::ordered_json;

/// Ground truth for one meter image: the reading string plus the optional
/// per-dial boxes and pointed values.
struct GroundTruthDial {
  BBox box;
  double value = 0.0;  // in [0, 10)
};

struct GroundTruthRecord {
  std::string image_id;
  std::string reading;
  std::vector<GroundTruthDial> dials;
};

/// One assembled reading as written by the `read` command. Only image_id and
/// reading are required on parse; the rest is diagnostics and config echo.
struct PredictionRecord {
  std::string image_id;
  std::string reading;
  std::vector<double> per_dial;
  double tilt_applied = 0.0;
  int corrections_applied = 0;
  bool collinearity_warning = false;
  std::string mode;  // empty when unknown
  std::optional<CorrectionThresholds> thresholds;
};

struct ParsedDetections {
  std::vector<MeterObservation> observations;
  std::vector<std::string> warnings;  // per-record clamp notices
};

namespace io_detail {

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

inline nlohmann::json parse_line(const std::string& line, std::size_t line_no) {
  if (line.find_first_not_of(" \t") == std::string::npos) {
    throw ParseError(line_no, "empty line");
  }
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, "invalid JSON (" + std::string(e.what()) + ")");
  }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(path.empty() ? key : path + "." + key, "missing field");
  }
  return obj.at(key);
}

inline double require_number(const nlohmann::json& obj, const char* key,
                             const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number()) {
    throw ValidationError(path.empty() ? key : path + "." + key, "must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ValidationError(path.empty() ? key : path + "." + key, "must be finite");
  }
  return d;
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) {
    throw ValidationError(path.empty() ? key : path + "." + key, "must be a string");
  }
  return v.get<std::string>();
}

inline std::string require_reading(const nlohmann::json& obj, const char* key,
                                   const std::string& path) {
  const std::string s = require_string(obj, key, path);
  const std::string field = path.empty() ? key : path + "." + key;
  if (s.empty()) throw ValidationError(field, "must be non-empty");
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw ValidationError(field, "must contain digits only");
  }
  return s;
}

inline BBox parse_bbox(const nlohmann::json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) {
    throw ValidationError(path, "must be an array [cx, cy, w, h]");
  }
  for (const auto& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) {
      throw ValidationError(path, "entries must be finite numbers");
    }
  }
  BBox box{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
  if (!(box.w > 0.0)) throw ValidationError(path + ".w", "must be positive");
  if (!(box.h > 0.0)) throw ValidationError(path + ".h", "must be positive");
  return box;
}

inline ojson bbox_json(const BBox& box) { return ojson::array({box.cx, box.cy, box.w, box.h}); }

/// Clamps a box into [0, width] x [0, height]. Returns true when anything
/// moved; throws when nothing of the box remains inside. Boxes already in
/// bounds (within 1e-9 px) come back untouched.
inline bool clamp_into_image(BBox& box, double width, double height, const std::string& path) {
  constexpr double kSlack = 1e-9;
  if (box.left() >= -kSlack && box.top() >= -kSlack && box.right() <= width + kSlack &&
      box.bottom() <= height + kSlack) {
    return false;
  }
  const double l = std::max(box.left(), 0.0);
  const double t = std::max(box.top(), 0.0);
  const double r = std::min(box.right(), width);
  const double b = std::min(box.bottom(), height);
  if (!(r - l > 0.0) || !(b - t > 0.0)) {
    throw ValidationError(path, "box lies entirely outside the image");
  }
  box = BBox{(l + r) / 2.0, (t + b) / 2.0, r - l, b - t};
  return true;
}

inline void check_finite(double v, const std::string& path) {
  if (!std::isfinite(v)) throw ValidationError(path, "must be finite");
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Detections (JSONL, one MeterObservation per line)

inline ojson detection_to_json(const MeterObservation& obs) {
  ojson rec;
  rec["image_id"] = obs.image_id;
  rec["width"] = obs.width;
  rec["height"] = obs.height;
  ojson dials = ojson::array();
  for (const auto& d : obs.dials) {
    ojson dial;
    dial["bbox"] = io_detail::bbox_json(d.box);
    ojson payload;
    if (const auto* cs = std::get_if<ClassScoresPayload>(&d.payload)) {
      payload["kind"] = "class_scores";
      payload["data"] = cs->scores;
    } else if (const auto* vp = std::get_if<ValuePayload>(&d.payload)) {
      payload["kind"] = "value";
      payload["data"] = vp->value.value();
    } else {
      const auto& sc = std::get<SinCosPayload>(d.payload);
      payload["kind"] = "sincos";
      payload["data"] = ojson::array({sc.vec.s, sc.vec.c});
    }
    dial["payload"] = payload;
    dial["confidence"] = d.confidence;
    dials.push_back(dial);
  }
  rec["dials"] = dials;
  return rec;
}

inline MeterObservation detection_from_json(const nlohmann::json& rec,
                                            std::vector<std::string>* warnings = nullptr) {
  using namespace io_detail;
  MeterObservation obs;
  obs.image_id = require_string(rec, "image_id", "");
  if (obs.image_id.empty()) throw ValidationError("image_id", "must be non-empty");
  const double w = require_number(rec, "width", "");
  const double h = require_number(rec, "height", "");
  if (!(w > 0.0) || w != std::floor(w) || w > 1e9) {
    throw ValidationError("width", "must be a positive integer");
  }
  if (!(h > 0.0) || h != std::floor(h) || h > 1e9) {
    throw ValidationError("height", "must be a positive integer");
  }
  obs.width = static_cast<int>(w);
  obs.height = static_cast<int>(h);

  const auto& dials = require(rec, "dials", "");
  if (!dials.is_array()) throw ValidationError("dials", "must be an array");
  for (std::size_t i = 0; i < dials.size(); ++i) {
    const std::string path = "dials[" + std::to_string(i) + "]";
    const auto& dj = dials[i];
    if (!dj.is_object()) throw ValidationError(path, "must be an object");
    DialDetection det;
    det.box = parse_bbox(require(dj, "bbox", path), path + ".bbox");
    if (clamp_into_image(det.box, w, h, path + ".bbox") && warnings != nullptr) {
      warnings->push_back(obs.image_id + ": " + path + ".bbox clamped to image bounds");
    }
    det.confidence = require_number(dj, "confidence", path);
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
      throw ValidationError(path + ".confidence", "must be in [0, 1]");
    }

    const auto& pj = require(dj, "payload", path);
    const std::string kind = require_string(pj, "kind", path + ".payload");
    const auto& data = require(pj, "data", path + ".payload");
    const std::string data_path = path + ".payload.data";
    if (kind == "class_scores") {
      if (!data.is_array() || data.size() != 10) {
        throw ValidationError(data_path, "must be an array of exactly 10 scores");
      }
      ClassScoresPayload cs;
      double sum = 0.0;
      for (std::size_t j = 0; j < 10; ++j) {
        if (!data[j].is_number()) throw ValidationError(data_path, "scores must be numbers");
        cs.scores[j] = data[j].get<double>();
        if (!std::isfinite(cs.scores[j]) || cs.scores[j] < 0.0) {
          throw ValidationError(data_path, "scores must be finite and non-negative");
        }
        sum += cs.scores[j];
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        throw ValidationError(data_path, "scores must sum to 1 within 1e-6");
      }
      det.payload = cs;
    } else if (kind == "value") {
      if (!data.is_number()) throw ValidationError(data_path, "must be a number");
      const double v = data.get<double>();
      if (!std::isfinite(v) || v < 0.0 || v >= 10.0) {
        throw ValidationError(data_path, "must be in [0, 10)");
      }
      det.payload = ValuePayload{DialValue(v)};
    } else if (kind == "sincos") {
      if (!data.is_array() || data.size() != 2 || !data[0].is_number() || !data[1].is_number()) {
        throw ValidationError(data_path, "must be an array [sin, cos]");
      }
      const double s = data[0].get<double>();
      const double c = data[1].get<double>();
      if (!std::isfinite(s) || !std::isfinite(c)) {
        throw ValidationError(data_path, "entries must be finite");
      }
      det.payload = SinCosPayload{UnitVec{s, c}};
    } else {
      throw ValidationError(path + ".payload.kind",
                            "must be one of class_scores, value, sincos");
    }
    obs.dials.push_back(std::move(det));
  }
  return obs;
}

inline ParsedDetections parse_detections(const std::string& path) {
  ParsedDetections out;
  const auto lines = io_detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto rec = io_detail::parse_line(lines[i], i + 1);
    out.observations.push_back(detection_from_json(rec, &out.warnings));
  }
  return out;
}

inline void write_detections(const std::vector<MeterObservation>& observations,
                             const std::string& path) {
  std::string text;
  for (const auto& obs : observations) {
    text += detection_to_json(obs).dump();
    text += '\n';
  }
  io_detail::write_text(path, text);
}

// ---------------------------------------------------------------------------
// Ground truth (JSONL)

inline ojson ground_truth_to_json(const GroundTruthRecord& rec) {
  ojson j;
  j["image_id"] = rec.image_id;
  j["reading"] = rec.reading;
  if (!rec.dials.empty()) {
    ojson dials = ojson::array();
    for (const auto& d : rec.dials) {
      ojson dial;
      dial["bbox"] = io_detail::bbox_json(d.box);
      dial["value"] = d.value;
      dials.push_back(dial);
    }
    j["dials"] = dials;
  }
  return j;
}

inline GroundTruthRecord ground_truth_from_json(const nlohmann::json& j) {
  using namespace io_detail;
  GroundTruthRecord rec;
  rec.image_id = require_string(j, "image_id", "");
  if (rec.image_id.empty()) throw ValidationError("image_id", "must be non-empty");
  rec.reading = require_reading(j, "reading", "");
  if (j.contains("dials")) {
    const auto& dials = j.at("dials");
    if (!dials.is_array()) throw ValidationError("dials", "must be an array");
    for (std::size_t i = 0; i < dials.size(); ++i) {
      const std::string path = "dials[" + std::to_string(i) + "]";
      GroundTruthDial d;
      d.box = parse_bbox(require(dials[i], "bbox", path), path + ".bbox");
      d.value = require_number(dials[i], "value", path);
      if (d.value < 0.0 || d.value >= 10.0) {
        throw ValidationError(path + ".value", "must be in [0, 10)");
      }
      rec.dials.push_back(d);
    }
  }
  return rec;
}

inline std::vector<GroundTruthRecord> parse_ground_truth(const std::string& path) {
  std::vector<GroundTruthRecord> out;
  const auto lines = io_detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out.push_back(ground_truth_from_json(io_detail::parse_line(lines[i], i + 1)));
  }
  return out;
}

inline void write_ground_truth(const std::vector<GroundTruthRecord>& records,
                               const std::string& path) {
  std::string text;
  for (const auto& rec : records) {
    text += ground_truth_to_json(rec).dump();
    text += '\n';
  }
  io_detail::write_text(path, text);
}

// ---------------------------------------------------------------------------
// Correction thresholds (single JSON document)

inline ojson thresholds_to_json(const CorrectionThresholds& t) {
  ojson j;
  j["carry_up"] = {{"cur_frac_min", t.carry_up.cur_frac_min},
                   {"next_val_max", t.carry_up.next_val_max},
                   {"enabled", t.carry_up.enabled}};
  j["carry_down"] = {{"cur_frac_max", t.carry_down.cur_frac_max},
                     {"next_val_min", t.carry_down.next_val_min},
                     {"enabled", t.carry_down.enabled}};
  return j;
}

inline CorrectionThresholds thresholds_from_json(const nlohmann::json& j) {
  using namespace io_detail;
  CorrectionThresholds t;
  const auto& up = require(j, "carry_up", "");
  t.carry_up.cur_frac_min = require_number(up, "cur_frac_min", "carry_up");
  t.carry_up.next_val_max = require_number(up, "next_val_max", "carry_up");
  if (up.contains("enabled")) t.carry_up.enabled = up.at("enabled").get<bool>();
  const auto& down = require(j, "carry_down", "");
  t.carry_down.cur_frac_max = require_number(down, "cur_frac_max", "carry_down");
  t.carry_down.next_val_min = require_number(down, "next_val_min", "carry_down");
  if (down.contains("enabled")) t.carry_down.enabled = down.at("enabled").get<bool>();
  validate_thresholds(t);
  return t;
}

inline CorrectionThresholds parse_thresholds(const std::string& path) {
  const auto lines = io_detail::read_lines(path);
  std::string text;
  for (const auto& l : lines) text += l;
  try {
    return thresholds_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, "invalid JSON (" + std::string(e.what()) + ")");
  }
}

inline void write_thresholds(const CorrectionThresholds& t, const std::string& path) {
  io_detail::write_text(path, thresholds_to_json(t).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Calibration grid (single JSON document)

inline CalibrationGrid grid_from_json(const nlohmann::json& j) {
  auto list = [&](const char* key) {
    const auto& v = io_detail::require(j, key, "");
    if (!v.is_array() || v.empty()) {
      throw ValidationError(key, "must be a non-empty array");
    }
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ValidationError(key, "entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  };
  CalibrationGrid g;
  g.cur_frac_min = list("cur_frac_min");
  g.next_val_max = list("next_val_max");
  g.cur_frac_max = list("cur_frac_max");
  g.next_val_min = list("next_val_min");
  validate_grid(g);
  return g;
}

inline CalibrationGrid parse_grid(const std::string& path) {
  const auto lines = io_detail::read_lines(path);
  std::string text;
  for (const auto& l : lines) text += l;
  try {
    return grid_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, "invalid JSON (" + std::string(e.what()) + ")");
  }
}

// ---------------------------------------------------------------------------
// Predictions (JSONL, output of `read`)

inline ojson prediction_to_json(const PredictionRecord& rec) {
  ojson j;
  j["image_id"] = rec.image_id;
  j["reading"] = rec.reading;
  j["per_dial"] = rec.per_dial;
  j["tilt_applied"] = rec.tilt_applied;
  j["corrections_applied"] = rec.corrections_applied;
  j["collinearity_warning"] = rec.collinearity_warning;
  j["mode"] = rec.mode;
  j["thresholds"] = rec.thresholds ? thresholds_to_json(*rec.thresholds) : ojson(nullptr);
  return j;
}

inline PredictionRecord prediction_from_json(const nlohmann::json& j) {
  using namespace io_detail;
  PredictionRecord rec;
  rec.image_id = require_string(j, "image_id", "");
  if (rec.image_id.empty()) throw ValidationError("image_id", "must be non-empty");
  rec.reading = require_reading(j, "reading", "");
  if (j.contains("per_dial")) {
    if (!j.at("per_dial").is_array()) throw ValidationError("per_dial", "must be an array");
    for (const auto& v : j.at("per_dial")) {
      if (!v.is_number()) throw ValidationError("per_dial", "entries must be numbers");
      rec.per_dial.push_back(v.get<double>());
    }
  }
  if (j.contains("tilt_applied")) rec.tilt_applied = j.at("tilt_applied").get<double>();
  if (j.contains("corrections_applied")) {
    rec.corrections_applied = j.at("corrections_applied").get<int>();
  }
  if (j.contains("collinearity_warning")) {
    rec.collinearity_warning = j.at("collinearity_warning").get<bool>();
  }
  if (j.contains("mode") && j.at("mode").is_string()) rec.mode = j.at("mode").get<std::string>();
  if (j.contains("thresholds") && j.at("thresholds").is_object()) {
    rec.thresholds = thresholds_from_json(j.at("thresholds"));
  }
  return rec;
}

inline std::vector<PredictionRecord> parse_predictions(const std::string& path) {
  std::vector<PredictionRecord> out;
  const auto lines = io_detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out.push_back(prediction_from_json(io_detail::parse_line(lines[i], i + 1)));
  }
  return out;
}

inline void write_predictions(const std::vector<PredictionRecord>& records,
                              const std::string& path) {
  std::string text;
  for (const auto& rec : records) {
    text += prediction_to_json(rec).dump();
    text += '\n';
  }
  io_detail::write_text(path, text);
}

// ---------------------------------------------------------------------------
// Metrics report (single JSON or CSV document)

/// Run configuration echoed into the report for traceability.
struct ReportConfig {
  std::optional<std::string> mode;
  std::optional<CorrectionThresholds> thresholds;
  std::uint64_t seed = 0;
  unsigned long long tolerance = 1;
};

inline void validate_report_numbers(const MetricsReport& report) {
  io_detail::check_finite(report.mrr, "mrr");
  io_detail::check_finite(report.drr, "drr");
  io_detail::check_finite(report.mae, "mae");
  for (const auto& [tol, v] : report.tolerant_mrr) {
    io_detail::check_finite(v, "tolerant_mrr." + std::to_string(tol));
  }
  for (const auto& [pos, v] : report.position_errors) {
    io_detail::check_finite(v, "position_errors." + std::to_string(pos));
  }
}

inline ojson report_to_json(const MetricsReport& report, const ReportConfig& config) {
  validate_report_numbers(report);
  ojson j;
  j["n"] = report.n_meters;
  j["mrr"] = report.mrr;
  j["drr"] = report.drr;
  j["mae"] = report.mae;
  ojson tol;
  for (const auto& [t, v] : report.tolerant_mrr) tol[std::to_string(t)] = v;
  j["tolerant_mrr"] = tol;
  ojson pos = ojson::object();
  for (const auto& [p, v] : report.position_errors) pos[std::to_string(p)] = v;
  j["position_errors"] = pos;
  ojson hist;
  for (const auto& [bucket, count] : report.magnitude_histogram) hist[bucket] = count;
  j["magnitude_histogram"] = hist;
  j["unequal_length_count"] = report.unequal_length_count;
  ojson cfg;
  cfg["mode"] = config.mode ? ojson(*config.mode) : ojson(nullptr);
  cfg["thresholds"] = config.thresholds ? thresholds_to_json(*config.thresholds) : ojson(nullptr);
  cfg["seed"] = config.seed;
  cfg["tolerance"] = config.tolerance;
  j["config"] = cfg;
  return j;
}

inline std::pair<MetricsReport, ReportConfig> report_from_json(const nlohmann::json& j) {
  using namespace io_detail;
  MetricsReport report;
  report.n_meters = require(j, "n", "").get<std::size_t>();
  report.mrr = require_number(j, "mrr", "");
  report.drr = require_number(j, "drr", "");
  report.mae = require_number(j, "mae", "");
  for (const auto& [key, v] : require(j, "tolerant_mrr", "").items()) {
    report.tolerant_mrr[std::stoull(key)] = v.get<double>();
  }
  for (const auto& [key, v] : require(j, "position_errors", "").items()) {
    report.position_errors[std::stoi(key)] = v.get<double>();
  }
  for (const char* bucket : kMagnitudeBuckets) {
    const auto& hist = require(j, "magnitude_histogram", "");
    if (!hist.contains(bucket)) {
      throw ValidationError(std::string("magnitude_histogram.") + bucket, "missing bucket");
    }
    report.magnitude_histogram.emplace_back(bucket, hist.at(bucket).get<std::size_t>());
  }
  report.unequal_length_count = require(j, "unequal_length_count", "").get<std::size_t>();

  ReportConfig config;
  const auto& cfg = require(j, "config", "");
  if (cfg.contains("mode") && cfg.at("mode").is_string()) {
    config.mode = cfg.at("mode").get<std::string>();
  }
  if (cfg.contains("thresholds") && cfg.at("thresholds").is_object()) {
    config.thresholds = thresholds_from_json(cfg.at("thresholds"));
  }
  if (cfg.contains("seed")) config.seed = cfg.at("seed").get<std::uint64_t>();
  if (cfg.contains("tolerance")) {
    config.tolerance = cfg.at("tolerance").get<unsigned long long>();
  }
  return {report, config};
}

inline std::pair<MetricsReport, ReportConfig> parse_report(const std::string& path) {
  const auto lines = io_detail::read_lines(path);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  try {
    return report_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, "invalid JSON (" + std::string(e.what()) + ")");
  }
}

namespace io_detail {

/// Shortest round-trip decimal form, same as the JSON serializer uses.
inline std::string number_str(double v) { return nlohmann::json(v).dump(); }

}  // namespace io_detail

inline std::string report_to_csv(const MetricsReport& report, const ReportConfig& config) {
  validate_report_numbers(report);
  std::string csv = "metric,value\n";
  csv += "n," + std::to_string(report.n_meters) + "\n";
  csv += "mrr," + io_detail::number_str(report.mrr) + "\n";
  csv += "drr," + io_detail::number_str(report.drr) + "\n";
  csv += "mae," + io_detail::number_str(report.mae) + "\n";
  for (const auto& [tol, v] : report.tolerant_mrr) {
    csv += "tolerant_mrr_" + std::to_string(tol) + "," + io_detail::number_str(v) + "\n";
  }
  csv += "unequal_length_count," + std::to_string(report.unequal_length_count) + "\n";
  for (const auto& [pos, v] : report.position_errors) {
    csv += "position_error_" + std::to_string(pos) + "," + io_detail::number_str(v) + "\n";
  }
  for (const auto& [bucket, count] : report.magnitude_histogram) {
    csv += "magnitude_" + bucket + "," + std::to_string(count) + "\n";
  }
  if (config.mode) csv += "config_mode," + *config.mode + "\n";
  if (config.thresholds) {
    const auto& t = *config.thresholds;
    csv += "config_carry_up_cur_frac_min," + io_detail::number_str(t.carry_up.cur_frac_min) + "\n";
    csv += "config_carry_up_next_val_max," + io_detail::number_str(t.carry_up.next_val_max) + "\n";
    csv += "config_carry_down_cur_frac_max," + io_detail::number_str(t.carry_down.cur_frac_max) + "\n";
    csv += "config_carry_down_next_val_min," + io_detail::number_str(t.carry_down.next_val_min) + "\n";
  }
  csv += "config_seed," + std::to_string(config.seed) + "\n";
  csv += "config_tolerance," + std::to_string(config.tolerance) + "\n";
  return csv;
}

enum class ReportFormat { Json, Csv };

inline void write_report(const MetricsReport& report, const ReportConfig& config,
                         const std::string& path, ReportFormat format = ReportFormat::Json) {
  if (format == ReportFormat::Json) {
    io_detail::write_text(path, report_to_json(report, config).dump(2) + "\n");
  } else {
    io_detail::write_text(path, report_to_csv(report, config));
  }
}

}  // namespace dialkit
