#pragma once

#include <cmath>
#include <numbers>

namespace sweep {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  // z-component of the 3-D cross product; positive when o is left of this
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  Vec2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {x * c - y * s, x * s + y * c};
  }
  // perpendicular pointing to the left of this vector
  Vec2 left_perp() const { return {-y, x}; }
};

inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

// normalize an angle into (-pi, pi]
inline double wrap_pi(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

inline double bearing(const Vec2& from, const Vec2& to) {
  return std::atan2(to.y - from.y, to.x - from.x);
}

struct CellIndex {
  int col = 0;
  int row = 0;
  bool operator==(const CellIndex&) const = default;
};

// planar vehicle state; psi is the heading from +x, counter-clockwise
struct UavState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double psi = 0.0;
  Vec2 ground() const { return {x, y}; }
};

// gimbal yaw interval, radians relative to vehicle heading; psi1 <= psi2
struct SweepBounds {
  double psi1 = 0.0;
  double psi2 = 0.0;
  double width() const { return psi2 - psi1; }
};

}  // namespace sweep
