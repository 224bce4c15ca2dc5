#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dialkit/dial_model.hpp"
#include "dialkit/errors.hpp"
#include "dialkit/geometry.hpp"
#include "dialkit/pipeline.hpp"

namespace dialkit {

enum class PayloadKind { ClassScores, Value, SinCos };

/// Geometry of the synthetic counter. The implied image canvas is
/// (2 * counter_center.x) x (2 * counter_center.y) pixels.
struct MeterLayout {
  Point counter_center{320.0, 240.0};
  double dial_pitch = 90.0;  // center-to-center spacing, px
  double dial_box = 80.0;    // square box side, px
};

/// Everything that defines one synthetic meter.
struct MeterSpec {
  std::string image_id = "synthetic";
  int dial_count = 5;
  double consumption = 0.0;  // continuous register position, kWh
  MeterLayout layout;
  double tilt_deg = 0.0;     // in [-45, 45]
  PayloadKind payload_kind = PayloadKind::SinCos;
};

/// Fault injection parameters. Everything is deterministic given the seed;
/// per dial the draw order is fixed: angle jitter, flip, drop, duplicate,
/// then the duplicate's two center offsets and angle jitter (always drawn,
/// fired or not), so identical seeds replay identical faults.
struct NoiseModel {
  double angle_sigma = 0.0;  // degrees
  double flip_prob = 0.0;    // pointer angle mirrored (symmetry error)
  double drop_prob = 0.0;    // dial not detected
  double dup_prob = 0.0;     // extra jittered detection at confidence x 0.9
  std::uint64_t seed = 0;
};

/// A generated observation plus its exact ground truth.
struct SyntheticSample {
  MeterObservation observation;
  std::string gt_reading;
  std::vector<DialValue> gt_values;
  MeterSpec spec;
  NoiseModel noise;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stable per-sample stream derivation from (seed, index, tag).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(index * 2 + tag));
}

/// Uniform double in [0, 1) built directly from engine output, so the draw
/// sequence does not depend on the standard library's distribution choices.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; always consumes exactly two draws.
inline double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

struct DialFaults {
  double jitter_z = 0.0;  // standard-normal draws, scaled by sigma at render
  bool flip = false;
  bool drop = false;
  bool dup = false;
  double dup_dx_z = 0.0;
  double dup_dy_z = 0.0;
  double dup_angle_z = 0.0;
};

inline std::vector<DialFaults> derive_faults(const NoiseModel& noise, int k) {
  std::mt19937_64 rng(noise.seed);
  std::vector<DialFaults> faults(static_cast<std::size_t>(k));
  for (auto& f : faults) {
    f.jitter_z = gaussian(rng);
    f.flip = uniform01(rng) < noise.flip_prob;
    f.drop = uniform01(rng) < noise.drop_prob;
    f.dup = uniform01(rng) < noise.dup_prob;
    f.dup_dx_z = gaussian(rng);
    f.dup_dy_z = gaussian(rng);
    f.dup_angle_z = gaussian(rng);
  }
  return faults;
}

inline BBox clamp_box(BBox box, double width, double height) {
  if (box.left() >= 0.0 && box.top() >= 0.0 && box.right() <= width && box.bottom() <= height) {
    return box;
  }
  const double l = std::max(box.left(), 0.0);
  const double t = std::max(box.top(), 0.0);
  const double r = std::min(box.right(), width);
  const double b = std::min(box.bottom(), height);
  return BBox{(l + r) / 2.0, (t + b) / 2.0, r - l, b - t};
}

inline DialPayload render_payload(PayloadKind kind, AngleDeg apparent, Orientation o) {
  switch (kind) {
    case PayloadKind::Value:
      return ValuePayload{angle_to_value(apparent, o)};
    case PayloadKind::SinCos:
      return SinCosPayload{encode_angle(apparent)};
    case PayloadKind::ClassScores:
    default: {
      // Soft one-hot at the floor of the apparent value: 0.99 on the digit,
      // 0.01 spread uniformly.
      ClassScoresPayload cs;
      cs.scores.fill(0.001);
      cs.scores[static_cast<std::size_t>(angle_to_value(apparent, o).floor_digit())] += 0.99;
      return cs;
    }
  }
}

inline MeterObservation render(const MeterSpec& spec, const std::vector<DialFaults>& faults,
                               double angle_sigma, double tilt_deg) {
  const int k = spec.dial_count;
  const auto pattern = orientation_pattern(k);
  const auto values = decompose_consumption(spec.consumption, k);
  const double width = 2.0 * spec.layout.counter_center.x;
  const double height = 2.0 * spec.layout.counter_center.y;

  MeterObservation obs;
  obs.image_id = spec.image_id;
  obs.width = static_cast<int>(std::lround(width));
  obs.height = static_cast<int>(std::lround(height));

  for (int i = 0; i < k; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto& f = faults[idx];
    const Point flat{spec.layout.counter_center.x +
                         (static_cast<double>(i) - (k - 1) / 2.0) * spec.layout.dial_pitch,
                     spec.layout.counter_center.y};
    const Point center = rotate_point(flat, spec.layout.counter_center, tilt_deg);

    // Pointer angle before the photo is tilted: true angle, jitter, then the
    // optional symmetry flip. The tilt shifts whatever the faults produced.
    double angle = value_to_angle(values[idx], pattern[idx]).degrees();
    angle += angle_sigma * f.jitter_z;
    if (f.flip) angle = 360.0 - angle;

    if (f.drop) continue;

    DialDetection det;
    det.box = clamp_box(BBox{center.x, center.y, spec.layout.dial_box, spec.layout.dial_box},
                        width, height);
    det.payload = render_payload(spec.payload_kind, AngleDeg(angle + tilt_deg), pattern[idx]);
    det.confidence = 0.98;
    obs.dials.push_back(det);

    if (f.dup) {
      DialDetection dup;
      dup.box = clamp_box(BBox{center.x + 0.05 * spec.layout.dial_box * f.dup_dx_z,
                               center.y + 0.05 * spec.layout.dial_box * f.dup_dy_z,
                               spec.layout.dial_box, spec.layout.dial_box},
                          width, height);
      dup.payload = render_payload(spec.payload_kind,
                                   AngleDeg(angle + angle_sigma * f.dup_angle_z + tilt_deg),
                                   pattern[idx]);
      dup.confidence = 0.98 * 0.9;
      obs.dials.push_back(dup);
    }
  }
  return obs;
}

}  // namespace detail

inline void validate_noise(const NoiseModel& noise) {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(name, "probability must be in [0, 1]");
  };
  if (!(noise.angle_sigma >= 0.0)) throw ValidationError("angle_sigma", "must be >= 0");
  prob(noise.flip_prob, "flip_prob");
  prob(noise.drop_prob, "drop_prob");
  prob(noise.dup_prob, "dup_prob");
}

inline void validate_spec(const MeterSpec& spec) {
  check_dial_count(spec.dial_count);
  detail::check_consumption(spec.consumption, spec.dial_count);
  if (!(spec.layout.dial_pitch > 0.0) || !(spec.layout.dial_box > 0.0)) {
    throw InvalidMeterSpec("dial_pitch and dial_box must be positive");
  }
  if (!(spec.tilt_deg >= -45.0 && spec.tilt_deg <= 45.0)) {
    throw InvalidMeterSpec("tilt must be in [-45, 45] degrees");
  }
  const double width = 2.0 * spec.layout.counter_center.x;
  const double height = 2.0 * spec.layout.counter_center.y;
  const double half = spec.layout.dial_box / 2.0;
  for (int i = 0; i < spec.dial_count; ++i) {
    const Point flat{spec.layout.counter_center.x +
                         (static_cast<double>(i) - (spec.dial_count - 1) / 2.0) *
                             spec.layout.dial_pitch,
                     spec.layout.counter_center.y};
    const Point c = rotate_point(flat, spec.layout.counter_center, spec.tilt_deg);
    if (c.x - half < 0.0 || c.x + half > width || c.y - half < 0.0 || c.y + half > height) {
      throw InvalidMeterSpec("dial boxes do not fit the implied image canvas");
    }
  }
}

/// Generates one mechanically consistent synthetic meter: per-dial apparent
/// angles follow the decomposed consumption and the orientation pattern,
/// shifted by the tilt exactly as a rotated photo would show them.
inline SyntheticSample generate(const MeterSpec& spec, const NoiseModel& noise) {
  validate_spec(spec);
  validate_noise(noise);
  SyntheticSample sample;
  sample.spec = spec;
  sample.noise = noise;
  sample.gt_values = decompose_consumption(spec.consumption, spec.dial_count);
  sample.gt_reading = true_reading(spec.consumption, spec.dial_count);
  sample.observation = detail::render(spec, detail::derive_faults(noise, spec.dial_count),
                                      noise.angle_sigma, spec.tilt_deg);
  return sample;
}

/// Re-renders a sample at a different tilt with the exact same fault draws,
/// playing the role of re-photographing the meter after rotation.
inline MeterObservation observe(const SyntheticSample& sample, double tilt_override) {
  if (!std::isfinite(tilt_override)) throw InvalidAngle("tilt override must be finite");
  return detail::render(sample.spec, detail::derive_faults(sample.noise, sample.spec.dial_count),
                        sample.noise.angle_sigma, tilt_override);
}

/// Adapts a sample into the pipeline's re-observation hook: a rotation of
/// delta degrees re-renders the sample at (original tilt + delta).
inline ReobserveFn make_reobserver(const SyntheticSample& sample) {
  return [sample](double rotation_deg) {
    return observe(sample, sample.spec.tilt_deg + rotation_deg);
  };
}

/// Draws a consumption whose fractional part mimics the field distribution
/// of pointer positions: with probability boundary_weight it clusters near
/// the digits (folded normal, sigma 0.05), otherwise it is uniform. Never
/// lands within 1e-9 of an integer.
inline double sample_consumption(std::mt19937_64& rng, int k, double boundary_weight) {
  check_dial_count(k);
  if (!(boundary_weight >= 0.0 && boundary_weight <= 1.0)) {
    throw ValidationError("boundary_weight", "must be in [0, 1]");
  }
  const double limit = detail::pow10i(k);
  const double ip =
      std::floor(detail::uniform01(rng) * limit);  // uniform over {0, ..., 10^k - 1}
  double frac = 0.0;
  do {
    if (detail::uniform01(rng) < boundary_weight) {
      double z;
      do {
        z = 0.05 * detail::gaussian(rng);
      } while (std::abs(z) >= 0.5);
      frac = z < 0.0 ? z + 1.0 : z;
    } else {
      frac = detail::uniform01(rng);
    }
  } while (frac < 1e-9 || frac > 1.0 - 1e-9);
  return ip + frac;
}

}  // namespace dialkit
