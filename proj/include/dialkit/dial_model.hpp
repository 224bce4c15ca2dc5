#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dialkit/errors.hpp"
#include "dialkit/geometry.hpp"

namespace dialkit {

/// Rotation sense of a dial. Adjacent dials on a counter alternate, with the
/// rightmost (least significant) one always clockwise.
enum class Orientation { CW, CCW };

/// Degrees of pointer travel per dial unit.
inline constexpr double kDegreesPerUnit = 36.0;

/// Values closer than this to an integer count as sitting exactly on the
/// digit mark. The simulator never emits values inside the band.
inline constexpr double kFloorGuardBand = 1e-9;

/// Continuous position of one dial pointer, in [0, 10) dial units.
class DialValue {
 public:
  DialValue() = default;

  explicit DialValue(double v) : v_(v) {
    if (!(v >= 0.0 && v < 10.0)) {
      throw ValidationError("dial_value", "must be in [0, 10), got " + std::to_string(v));
    }
  }

  double value() const noexcept { return v_; }

  /// Digit shown by the pointer: plain floor, except that values within the
  /// guard band of an integer snap onto that mark (9.999... wraps to 0).
  int floor_digit() const noexcept {
    const double nearest = std::round(v_);
    if (std::abs(v_ - nearest) <= kFloorGuardBand) return static_cast<int>(nearest) % 10;
    return static_cast<int>(v_);
  }

  /// Distance past the digit mark; exactly 0 inside the guard band.
  double frac() const noexcept {
    const double nearest = std::round(v_);
    if (std::abs(v_ - nearest) <= kFloorGuardBand) return 0.0;
    return v_ - std::floor(v_);
  }

 private:
  double v_ = 0.0;
};

inline void check_dial_count(int k) {
  if (k != 4 && k != 5) throw UnsupportedDialCount(k);
}

namespace detail {

// Alternating orientations ending CW at the rightmost position, for any k.
// Public callers go through orientation_pattern, which restricts k to {4, 5};
// this generalized form backs best-effort digit extraction on bad counts.
inline std::vector<Orientation> alternating_pattern(int k) {
  std::vector<Orientation> pattern(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    pattern[static_cast<std::size_t>(i)] =
        ((k - 1 - i) % 2 == 0) ? Orientation::CW : Orientation::CCW;
  }
  return pattern;
}

}  // namespace detail

/// Orientation of each dial, left to right, for a k-dial counter.
inline std::vector<Orientation> orientation_pattern(int k) {
  check_dial_count(k);
  return detail::alternating_pattern(k);
}

/// Clock angle shown by a pointer at value v on a dial of orientation o.
inline AngleDeg value_to_angle(DialValue v, Orientation o) {
  if (o == Orientation::CW) return AngleDeg(kDegreesPerUnit * v.value());
  return AngleDeg(360.0 - kDegreesPerUnit * v.value());
}

/// Inverse of value_to_angle.
inline DialValue angle_to_value(AngleDeg theta, Orientation o) {
  if (o == Orientation::CW) return DialValue(theta.degrees() / kDegreesPerUnit);
  return DialValue(std::fmod((360.0 - theta.degrees()) / kDegreesPerUnit, 10.0));
}

/// Value read at the same physical pointer angle under the opposite
/// orientation: (10 - v) mod 10.
inline DialValue mirror_value(DialValue v) {
  return DialValue(std::fmod(10.0 - v.value(), 10.0));
}

/// Label-level mirror, 9 - d: the digit interval [d, d+1) maps onto
/// [9-d, 10-d) under mirror_value.
inline int mirror_digit(int d) {
  if (d < 0 || d > 9) {
    throw ValidationError("digit", "must be in [0, 9], got " + std::to_string(d));
  }
  return 9 - d;
}

namespace detail {

inline double pow10i(int e) {
  double p = 1.0;
  for (int i = 0; i < e; ++i) p *= 10.0;
  return p;
}

inline void check_consumption(double c, int k) {
  check_dial_count(k);
  if (!(c >= 0.0 && c < pow10i(k))) {
    throw ConsumptionOverflow("consumption " + std::to_string(c) +
                              " not representable with " + std::to_string(k) + " dials");
  }
}

}  // namespace detail

/// Splits a continuous consumption C into the k mechanically coupled dial
/// positions, most significant first: v_i = (C / 10^(k-i)) mod 10. Adjacent
/// values satisfy frac(v_i) == v_{i+1} / 10.
inline std::vector<DialValue> decompose_consumption(double consumption, int k) {
  detail::check_consumption(consumption, k);
  std::vector<DialValue> values;
  values.reserve(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    values.emplace_back(std::fmod(consumption / detail::pow10i(k - i), 10.0));
  }
  return values;
}

/// Ground-truth digit string for a consumption: zero-padded floor(C).
inline std::string true_reading(double consumption, int k) {
  detail::check_consumption(consumption, k);
  const auto truncated = static_cast<long long>(std::floor(consumption));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%0*lld", k, truncated);
  return std::string(buf);
}

}  // namespace dialkit
