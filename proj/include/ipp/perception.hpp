#pragma once

#include <vector>

#include "ipp/rng.hpp"
#include "ipp/scenario.hpp"

namespace ipp {

struct Detection {
  Vec2 position = Vec2::Zero();  // measured, global frame
  int true_target_id = -1;       // logging only; mapper and planner never read it
  double range = 0.0;            // from the observing pose to the measured position

  bool operator==(const Detection&) const = default;
};

/// Localization error std (m) at detection range r: 0.0012 r^2.
double localization_sigma(double r);

/// Range <= max_range and |bearing - heading| <= fov/2, both inclusive.
bool in_fov(const Pose& pose, const Vec2& point, const SensorModelParams& params);

/// Camera frame (x right, y down, z forward) to global ENU.
Vec3 camera_to_global(const Vec3& p_c, const Pose& pose);
Vec3 global_to_camera(const Vec3& p_g, const Pose& pose);

/// One noisy detection per in-fov target lying inside the map, subject to the
/// configured miss rate. Measured positions are kept inside the fov.
std::vector<Detection> simulate_detections(const World& world, const Pose& pose,
                                           const SensorModelParams& params,
                                           const MapConfig& map, Engine& rng);

}  // namespace ipp
