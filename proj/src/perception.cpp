#include "ipp/perception.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace ipp {

namespace {

constexpr double kBoundaryEps = 1e-9;

Eigen::Matrix3d body_from_camera() {
  Eigen::Matrix3d r;
  r << 0, 0, 1,
      -1, 0, 0,
      0, -1, 0;
  return r;
}

Eigen::Matrix3d global_from_body(double psi) {
  return Eigen::AngleAxisd(psi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

bool inside_map(const MapConfig& map, const Vec2& p) {
  return p.x() >= 0.0 && p.x() < map.width && p.y() >= 0.0 && p.y() < map.height;
}

}  // namespace

double localization_sigma(double r) { return 0.0012 * r * r; }

bool in_fov(const Pose& pose, const Vec2& point, const SensorModelParams& params) {
  const Vec2 d = point - pose.position();
  const double r = d.norm();
  if (r > params.max_range + kBoundaryEps) return false;
  if (r == 0.0) return true;
  const double bearing = wrap_angle(std::atan2(d.y(), d.x()) - pose.psi);
  return std::abs(bearing) <= 0.5 * params.horizontal_fov + kBoundaryEps;
}

Vec3 camera_to_global(const Vec3& p_c, const Pose& pose) {
  return global_from_body(pose.psi) * body_from_camera() * p_c + Vec3(pose.x, pose.y, 0.0);
}

Vec3 global_to_camera(const Vec3& p_g, const Pose& pose) {
  return body_from_camera().transpose() * global_from_body(pose.psi).transpose() *
         (p_g - Vec3(pose.x, pose.y, 0.0));
}

std::vector<Detection> simulate_detections(const World& world, const Pose& pose,
                                           const SensorModelParams& params,
                                           const MapConfig& map, Engine& rng) {
  std::vector<Detection> out;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (const auto& target : world.targets) {
    if (!inside_map(map, target.position) || !in_fov(pose, target.position, params)) continue;
    if (params.miss_rate > 0.0 && u01(rng) < params.miss_rate) continue;

    const double sigma = localization_sigma((target.position - pose.position()).norm());
    // Redraw noise that would push the measurement out of the fov; fall back
    // to the true position after a bounded number of tries.
    Vec2 measured = target.position;
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double nx = n01(rng);
      const double ny = n01(rng);
      const Vec2 candidate = target.position + sigma * Vec2(nx, ny);
      if (in_fov(pose, candidate, params)) {
        measured = candidate;
        break;
      }
    }
    out.push_back({measured, target.id, (measured - pose.position()).norm()});
  }
  return out;
}

}  // namespace ipp
