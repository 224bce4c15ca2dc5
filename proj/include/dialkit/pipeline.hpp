#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dialkit/correction.hpp"
#include "dialkit/dial_model.hpp"
#include "dialkit/errors.hpp"
#include "dialkit/geometry.hpp"

namespace dialkit {

/// Per-class confidence for the ten digit classes.
struct ClassScoresPayload {
  std::array<double, 10> scores{};
};

/// A directly regressed continuous dial value.
struct ValuePayload {
  DialValue value;
};

/// A regressed (sin, cos) pair encoding the pointer's clock angle.
struct SinCosPayload {
  UnitVec vec;
};

using DialPayload = std::variant<ClassScoresPayload, ValuePayload, SinCosPayload>;

/// One detected dial: its box, whatever the model predicted for it, and the
/// detector confidence.
struct DialDetection {
  BBox box;
  DialPayload payload;
  double confidence = 1.0;
};

/// All detections for one image.
struct MeterObservation {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<DialDetection> dials;
};

/// How digits are produced from the detections.
enum class PipelineMode {
  Detection,   // digits from class scores, no correction
  Regression,  // digits from continuous values, carry correction applied
  Hybrid,      // digits from class scores, continuous values trigger correction
};

/// An assembled meter reading.
struct Reading {
  std::string digits;
  unsigned long long integer_value = 0;
  std::vector<DialValue> per_dial;    // corrected continuous values, left to right
  double tilt_applied = 0.0;          // rotation applied during rectification
  int corrections_applied = 0;        // dials whose digit the carry rules changed
  bool collinearity_warning = false;  // some dial center strays off the first-last line
};

inline void validate_detection(const DialDetection& det, const std::string& where = "dial") {
  if (!(det.box.w > 0.0) || !(det.box.h > 0.0)) {
    throw ValidationError(where + ".bbox", "extent must be positive");
  }
  if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
    throw ValidationError(where + ".confidence", "must be in [0, 1]");
  }
  if (const auto* cs = std::get_if<ClassScoresPayload>(&det.payload)) {
    double sum = 0.0;
    for (double s : cs->scores) {
      if (!(s >= 0.0)) throw ValidationError(where + ".payload", "class scores must be non-negative");
      sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ValidationError(where + ".payload", "class scores must sum to 1 within 1e-6");
    }
  }
}

/// Greedy non-maximum suppression in descending confidence order (ties keep
/// input order). A detection is dropped when it overlaps an already kept one
/// at IoU >= iou_threshold. Survivors keep their payloads and are returned
/// in rank order.
inline std::vector<DialDetection> nms(const std::vector<DialDetection>& dials,
                                      double iou_threshold = 0.5) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ValidationError("iou_threshold", "must be in (0, 1]");
  }
  std::vector<std::size_t> order(dials.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dials[a].confidence > dials[b].confidence;
  });
  std::vector<DialDetection> kept;
  for (std::size_t idx : order) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const DialDetection& k) {
      return iou(k.box, dials[idx].box) >= iou_threshold;
    });
    if (!suppressed) kept.push_back(dials[idx]);
  }
  return kept;
}

/// Reading order: sorted by box center x, stable for equal centers.
inline std::vector<DialDetection> order_dials(std::vector<DialDetection> dials) {
  std::stable_sort(dials.begin(), dials.end(), [](const DialDetection& a, const DialDetection& b) {
    return a.box.cx < b.box.cx;
  });
  return dials;
}

/// Tilt of the counter: angle of the segment through the first and last
/// dial centers, in (-90, 90] degrees.
inline double counter_tilt(const std::vector<DialDetection>& ordered_dials) {
  if (ordered_dials.size() < 2) {
    throw InsufficientDials("tilt estimation needs at least 2 dials, got " +
                            std::to_string(ordered_dials.size()));
  }
  return segment_angle(ordered_dials.front().box.center(), ordered_dials.back().box.center());
}

inline constexpr double kTiltThresholdDeg = 2.5;

/// Rectification fires only above the threshold, strictly.
inline bool needs_rotation(double tilt_deg) { return std::abs(tilt_deg) > kTiltThresholdDeg; }

/// Re-observation hook: given the rotation (degrees) to apply, produce a
/// fresh observation of the same meter, as if the corrected image were fed
/// back through the detector.
using ReobserveFn = std::function<MeterObservation(double rotation_deg)>;

/// Extracts (continuous value, is_discrete) from one detection. Class scores
/// yield the argmax digit (ties toward the smaller digit); sin/cos pairs are
/// decoded through the dial's orientation.
inline std::pair<DialValue, bool> dial_value(const DialDetection& det, Orientation o) {
  if (const auto* cs = std::get_if<ClassScoresPayload>(&det.payload)) {
    const auto it = std::max_element(cs->scores.begin(), cs->scores.end());
    return {DialValue(static_cast<double>(it - cs->scores.begin())), true};
  }
  if (const auto* vp = std::get_if<ValuePayload>(&det.payload)) {
    return {vp->value, false};
  }
  const auto& sc = std::get<SinCosPayload>(det.payload);
  return {angle_to_value(decode_angle(sc.vec.s, sc.vec.c), o), false};
}

namespace detail {

// Best-effort digit extraction for error reporting on unsupported counts:
// uses the generalized alternating orientation pattern.
inline std::string best_effort_digits(const std::vector<DialDetection>& ordered) {
  const int k = static_cast<int>(ordered.size());
  if (k == 0) return "";
  const auto pattern = alternating_pattern(k);
  std::string digits;
  for (int i = 0; i < k; ++i) {
    const auto [value, discrete] =
        dial_value(ordered[static_cast<std::size_t>(i)], pattern[static_cast<std::size_t>(i)]);
    digits.push_back(static_cast<char>('0' + value.floor_digit()));
  }
  return digits;
}

inline Point centroid_of_dials(const std::vector<DialDetection>& dials) {
  Point c{0.0, 0.0};
  for (const auto& d : dials) {
    c.x += d.box.cx;
    c.y += d.box.cy;
  }
  c.x /= static_cast<double>(dials.size());
  c.y /= static_cast<double>(dials.size());
  return c;
}

}  // namespace detail

/// Undoes a measured tilt. With a reobserve hook the corrected observation
/// comes from the hook, called with rotation -tilt; otherwise box centers
/// are rotated by -tilt about the centroid of all dial centers and sin-cos /
/// value payloads are shifted by -tilt in apparent clock angle. Class-score
/// payloads carry no angle and pass through unchanged, as do value payloads
/// when the orientation pattern cannot be established.
inline MeterObservation rectify(const MeterObservation& obs, double tilt_deg,
                                const ReobserveFn& reobserve = {}) {
  if (!std::isfinite(tilt_deg)) throw InvalidAngle("tilt must be finite");
  if (reobserve) return reobserve(-tilt_deg);
  if (tilt_deg == 0.0 || obs.dials.empty()) return obs;

  MeterObservation out = obs;
  const Point pivot = detail::centroid_of_dials(obs.dials);
  for (auto& det : out.dials) {
    const Point c = rotate_point(det.box.center(), pivot, -tilt_deg);
    det.box.cx = c.x;
    det.box.cy = c.y;
  }

  // Orientations for value payloads come from the value-carrying dials'
  // left-to-right order; resolvable only for supported counts.
  std::vector<std::size_t> value_dials;
  for (std::size_t i = 0; i < out.dials.size(); ++i) {
    if (std::holds_alternative<ValuePayload>(out.dials[i].payload)) value_dials.push_back(i);
  }
  std::vector<Orientation> value_pattern;
  if (value_dials.size() == 4 || value_dials.size() == 5) {
    std::sort(value_dials.begin(), value_dials.end(), [&](std::size_t a, std::size_t b) {
      return out.dials[a].box.cx < out.dials[b].box.cx;
    });
    value_pattern = orientation_pattern(static_cast<int>(value_dials.size()));
  }

  for (std::size_t i = 0; i < out.dials.size(); ++i) {
    auto& det = out.dials[i];
    if (auto* sc = std::get_if<SinCosPayload>(&det.payload)) {
      const AngleDeg apparent = decode_angle(sc->vec.s, sc->vec.c);
      sc->vec = encode_angle(AngleDeg(apparent.degrees() - tilt_deg));
    } else if (auto* vp = std::get_if<ValuePayload>(&det.payload)) {
      if (value_pattern.empty()) continue;
      const auto rank = static_cast<std::size_t>(
          std::find(value_dials.begin(), value_dials.end(), i) - value_dials.begin());
      const Orientation o = value_pattern[rank];
      const AngleDeg apparent = value_to_angle(vp->value, o);
      vp->value = angle_to_value(AngleDeg(apparent.degrees() - tilt_deg), o);
    }
  }
  return out;
}

namespace detail {

struct PreparedDials {
  std::vector<DialDetection> primary;  // NMS survivors in reading order
  std::vector<DialDetection> aux;      // hybrid mode: continuous detections
};

inline PreparedDials prepare_dials(const MeterObservation& obs, PipelineMode mode,
                                   double iou_threshold) {
  PreparedDials out;
  if (mode == PipelineMode::Hybrid) {
    for (const auto& d : obs.dials) {
      if (std::holds_alternative<ClassScoresPayload>(d.payload)) {
        out.primary.push_back(d);
      } else {
        out.aux.push_back(d);
      }
    }
  } else {
    out.primary = obs.dials;
  }
  out.primary = order_dials(nms(out.primary, iou_threshold));
  return out;
}

inline bool off_the_dial_line(const std::vector<DialDetection>& ordered) {
  const Point a = ordered.front().box.center();
  const Point b = ordered.back().box.center();
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  if (len == 0.0) return false;
  std::vector<double> heights;
  for (const auto& d : ordered) heights.push_back(d.box.h);
  std::sort(heights.begin(), heights.end());
  const double median_h = heights[heights.size() / 2];
  for (const auto& d : ordered) {
    const Point p = d.box.center();
    const double dist =
        std::abs((b.x - a.x) * (a.y - p.y) - (a.x - p.x) * (b.y - a.y)) / len;
    if (dist > 0.75 * median_h) return true;
  }
  return false;
}

/// Pairs each primary dial with the unconsumed auxiliary detection of
/// highest IoU, requiring IoU >= 0.5. Returns one optional value per dial.
inline std::vector<std::optional<DialValue>> pair_aux_values(
    const std::vector<DialDetection>& ordered, const std::vector<DialDetection>& aux,
    const std::vector<Orientation>& pattern) {
  std::vector<std::optional<DialValue>> values(ordered.size());
  std::vector<bool> used(aux.size(), false);
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    double best_iou = 0.0;
    std::size_t best = aux.size();
    for (std::size_t j = 0; j < aux.size(); ++j) {
      if (used[j]) continue;
      const double overlap = iou(ordered[i].box, aux[j].box);
      if (overlap > best_iou) {
        best_iou = overlap;
        best = j;
      }
    }
    if (best != aux.size() && best_iou >= 0.5) {
      used[best] = true;
      values[i] = dial_value(aux[best], pattern[i]).first;
    }
  }
  return values;
}

}  // namespace detail

/// Full assembly: NMS, reading order, tilt estimation, one rectification
/// pass when the tilt exceeds the threshold, per-dial value extraction, and
/// carry correction (Regression and Hybrid modes). Throws
/// UnsupportedDialCount, carrying the count and best-effort digits, when the
/// number of surviving dials is not 4 or 5.
inline Reading assemble_reading(const MeterObservation& obs, PipelineMode mode,
                                const CorrectionThresholds& thresholds = default_thresholds(),
                                const ReobserveFn& reobserve = {},
                                double iou_threshold = 0.5) {
  validate_thresholds(thresholds);
  auto prepared = detail::prepare_dials(obs, mode, iou_threshold);
  auto count_check = [](const detail::PreparedDials& p) {
    const int k = static_cast<int>(p.primary.size());
    if (k != 4 && k != 5) {
      throw UnsupportedDialCount(k, detail::best_effort_digits(p.primary));
    }
  };
  count_check(prepared);

  double rotation_applied = 0.0;
  const double tilt = counter_tilt(prepared.primary);
  if (needs_rotation(tilt)) {
    const MeterObservation rectified = rectify(obs, tilt, reobserve);
    rotation_applied = -tilt;
    prepared = detail::prepare_dials(rectified, mode, iou_threshold);
    count_check(prepared);
  }

  const auto& ordered = prepared.primary;
  const int k = static_cast<int>(ordered.size());
  const auto pattern = orientation_pattern(k);

  Reading reading;
  reading.tilt_applied = rotation_applied;
  reading.collinearity_warning = detail::off_the_dial_line(ordered);
  reading.per_dial.resize(ordered.size());
  std::vector<int> digits(ordered.size());

  if (mode == PipelineMode::Regression || mode == PipelineMode::Detection) {
    std::vector<DialValue> values;
    values.reserve(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      values.push_back(dial_value(ordered[i], pattern[i]).first);
    }
    if (mode == PipelineMode::Detection) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        digits[i] = values[i].floor_digit();
        reading.per_dial[i] = values[i];
      }
    } else {
      const auto trace = correct_sequence_trace(values, thresholds);
      for (std::size_t i = 0; i < trace.size(); ++i) {
        digits[i] = trace[i].digit;
        reading.per_dial[i] = trace[i].corrected;
        if (trace[i].fired()) ++reading.corrections_applied;
      }
    }
  } else {  // Hybrid
    const auto aux_values = detail::pair_aux_values(ordered, prepared.aux, pattern);
    std::vector<int> class_digits(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      class_digits[i] = dial_value(ordered[i], pattern[i]).first.floor_digit();
    }
    // Right-to-left over runs of paired dials: the continuous chain decides
    // whether a dial needs fixing; only then does its digit replace the
    // class digit. The rightmost dial is never corrected.
    std::optional<DialValue> next_value;
    for (int i = k - 1; i >= 0; --i) {
      const auto idx = static_cast<std::size_t>(i);
      digits[idx] = class_digits[idx];
      if (!aux_values[idx]) {
        next_value.reset();
        reading.per_dial[idx] = DialValue(static_cast<double>(class_digits[idx]));
        continue;
      }
      DialValue corrected = *aux_values[idx];
      if (i < k - 1 && next_value) {
        const DialCorrection dc = correct_dial(*aux_values[idx], *next_value, thresholds);
        corrected = dc.corrected;
        if (dc.fired() && dc.digit != class_digits[idx]) {
          digits[idx] = dc.digit;
          ++reading.corrections_applied;
        }
      }
      reading.per_dial[idx] = corrected;
      next_value = corrected;
    }
  }

  for (int d : digits) {
    reading.digits.push_back(static_cast<char>('0' + d));
    reading.integer_value = reading.integer_value * 10 + static_cast<unsigned>(d);
  }
  return reading;
}

/// Uncorrected continuous values for one observation, after NMS, ordering
/// and rectification: the calibration-time view of a meter.
inline std::vector<DialValue> extract_dial_values(const MeterObservation& obs,
                                                  const ReobserveFn& reobserve = {},
                                                  double iou_threshold = 0.5) {
  auto prepared = detail::prepare_dials(obs, PipelineMode::Regression, iou_threshold);
  const int k0 = static_cast<int>(prepared.primary.size());
  if (k0 != 4 && k0 != 5) {
    throw UnsupportedDialCount(k0, detail::best_effort_digits(prepared.primary));
  }
  const double tilt = counter_tilt(prepared.primary);
  if (needs_rotation(tilt)) {
    prepared = detail::prepare_dials(rectify(obs, tilt, reobserve), PipelineMode::Regression,
                                     iou_threshold);
    const int k1 = static_cast<int>(prepared.primary.size());
    if (k1 != 4 && k1 != 5) {
      throw UnsupportedDialCount(k1, detail::best_effort_digits(prepared.primary));
    }
  }
  const auto pattern = orientation_pattern(static_cast<int>(prepared.primary.size()));
  std::vector<DialValue> values;
  values.reserve(prepared.primary.size());
  for (std::size_t i = 0; i < prepared.primary.size(); ++i) {
    values.push_back(dial_value(prepared.primary[i], pattern[i]).first);
  }
  return values;
}

}  // namespace dialkit
