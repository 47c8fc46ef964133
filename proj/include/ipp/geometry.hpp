#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace ipp {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Vehicle pose in the global (local ENU) map frame.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;  // heading, wrapped to (-pi, pi]

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

}  // namespace ipp
