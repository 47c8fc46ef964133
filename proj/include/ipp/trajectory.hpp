#pragma once

#include <span>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

struct TimedPose {
  Pose pose;
  double t = 0.0;
};

/// Constant-speed path parameterized by arc length. Built from a dense
/// polyline (usually a sampled Bezier curve); poses are interpolated.
class Trajectory {
 public:
  Trajectory() = default;

  /// `points` is the dense geometric path; the first point is the start.
  /// `start_heading` is used for poses on zero-length paths.
  static Trajectory from_polyline(std::vector<Vec2> points, double speed,
                                  double start_heading, std::vector<Vec2> waypoints = {});

  /// Quartic Bezier through `start` and `waypoints` (endpoints interpolated,
  /// interior control points least-squares fitted at chord-length parameters).
  static Trajectory bezier_through(const Vec2& start, std::span<const Vec2> waypoints,
                                   double speed, double start_heading);

  bool empty() const { return arc_length_ <= 0.0; }
  double arc_length() const { return arc_length_; }
  double duration() const { return speed_ > 0.0 ? arc_length_ / speed_ : 0.0; }
  double speed() const { return speed_; }
  const std::vector<Vec2>& waypoints() const { return waypoints_; }
  const std::vector<Vec2>& points() const { return points_; }

  Pose pose_at_arc(double s) const;
  /// Pose after `t` seconds; clamped to the end pose beyond duration().
  Pose pose_at(double t) const;
  /// Poses at t = 0, dt, 2dt, ... plus the end pose if duration() is not a multiple.
  std::vector<TimedPose> sample(double dt) const;

  /// Prefix of length `arc`, keeping the first `keep_waypoints` waypoints.
  Trajectory truncated(double arc, std::size_t keep_waypoints) const;
  /// This path followed by `next` (which should start where this one ends).
  Trajectory then(const Trajectory& next) const;

  /// Largest discrete curvature (turn angle per unit length) along the path.
  double max_curvature() const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
  std::vector<Vec2> waypoints_;
  double arc_length_ = 0.0;
  double speed_ = 0.0;
  double start_heading_ = 0.0;
};

/// Dense samples of a quartic Bezier fitted as in Trajectory::bezier_through.
std::vector<Vec2> fit_quartic_bezier(const Vec2& start, std::span<const Vec2> waypoints,
                                     int samples = 200);

}  // namespace ipp
