#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "dialkit/errors.hpp"

namespace dialkit {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// An angle in degrees, kept normalized to [0, 360). Throughout the library
/// this is the "clock angle": degrees clockwise from the 12-o'clock pointer
/// position, so encode_angle(0) == (0, 1) points straight up.
class AngleDeg {
 public:
  AngleDeg() = default;

  /// Normalizes any finite value into [0, 360).
  explicit AngleDeg(double raw) {
    if (!std::isfinite(raw)) {
      throw InvalidAngle("angle must be finite, got " + std::to_string(raw));
    }
    double r = std::fmod(raw, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0;  // fmod can land exactly on 360 after the += above
    degrees_ = r;
  }

  double degrees() const noexcept { return degrees_; }

 private:
  double degrees_ = 0.0;
};

/// Reduces an arbitrary finite angle to its representative in [0, 360).
inline AngleDeg normalize_angle(double raw_degrees) { return AngleDeg(raw_degrees); }

/// A point on the unit circle: s is the sine coordinate, c the cosine
/// coordinate of a clock angle. Raw decoder inputs need not be unit-norm.
struct UnitVec {
  double s = 0.0;
  double c = 1.0;
};

/// Clock angle -> (sin, cos) pair on the unit circle.
inline UnitVec encode_angle(AngleDeg theta) {
  const double r = deg_to_rad(theta.degrees());
  return UnitVec{std::sin(r), std::cos(r)};
}

/// (sin, cos) pair -> clock angle. Scale-invariant: decode(k*s, k*c) equals
/// decode(s, c) for any k > 0. The all-zero input decodes to 0 by convention.
inline AngleDeg decode_angle(double s, double c) {
  if (s == 0.0 && c == 0.0) return AngleDeg(0.0);
  return AngleDeg(rad_to_deg(std::atan2(s, c)));
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned box, center + extent, in pixels. Image coordinates are
/// y-down (raster convention).
struct BBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const noexcept { return cx - w / 2.0; }
  double right() const noexcept { return cx + w / 2.0; }
  double top() const noexcept { return cy - h / 2.0; }
  double bottom() const noexcept { return cy + h / 2.0; }
  double area() const noexcept { return w * h; }
  Point center() const noexcept { return Point{cx, cy}; }
};

/// Intersection over union of two boxes, in [0, 1].
inline double iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

/// Angle between the segment p1->p2 and the x-axis, in (-90, 90] degrees.
/// Direction-free: swapping the endpoints gives the same result. With y-down
/// coordinates a positive angle means p2 sits lower in the image than p1.
inline double segment_angle(Point p1, Point p2) {
  const double dx = p2.x - p1.x;
  const double dy = p2.y - p1.y;
  if (dx == 0.0 && dy == 0.0) {
    throw DegenerateSegment("segment endpoints coincide");
  }
  double a = rad_to_deg(std::atan2(dy, dx));
  if (a <= -90.0) a += 180.0;
  if (a > 90.0) a -= 180.0;
  return a;
}

/// Rotates p by phi degrees about center. Positive phi turns +x toward +y,
/// which on a y-down image appears clockwise; this matches the sign of
/// segment_angle, so rotating by -segment_angle(p1, p2) levels the segment.
inline Point rotate_point(Point p, Point center, double phi_degrees) {
  const double r = deg_to_rad(phi_degrees);
  const double cs = std::cos(r);
  const double sn = std::sin(r);
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  return Point{center.x + dx * cs - dy * sn, center.y + dx * sn + dy * cs};
}

}  // namespace dialkit
