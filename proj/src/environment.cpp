#include "ipp/environment.hpp"

#include <algorithm>
#include <cmath>

namespace ipp {

WindState step_wind(const WindState& wind, const WindConfig& config, double dt, Engine& rng) {
  const double decay = std::exp(-dt / config.time_constant);
  std::normal_distribution<double> n01(0.0, 1.0);
  const double ns = n01(rng);
  const double nd = n01(rng);

  WindState next;
  next.speed = config.mean_speed + (wind.speed - config.mean_speed) * decay +
               config.speed_noise_std * std::sqrt(dt) * ns;
  next.speed = std::max(0.0, next.speed);

  const double dev = wrap_angle(wind.dir - config.mean_dir);
  next.dir = wrap_angle(config.mean_dir + dev * decay + config.dir_noise_std * std::sqrt(dt) * nd);
  return next;
}

Vec2 drift(const WindState& wind, double gamma, double dt) {
  return {gamma * wind.speed * std::cos(wind.dir) * dt,
          gamma * wind.speed * std::sin(wind.dir) * dt};
}

std::vector<TargetState> step_targets(const std::vector<TargetState>& targets,
                                      const WindState& wind, const ScenarioConfig& config,
                                      double dt, Engine& rng) {
  const Vec2 d = drift(wind, config.wind.gamma, dt);
  const double sigma = config.targets.process_noise_std * std::sqrt(dt);
  std::normal_distribution<double> n01(0.0, 1.0);

  std::vector<TargetState> out = targets;
  for (auto& t : out) {
    t.position += d;
    if (sigma > 0.0) {
      const double nx = n01(rng);
      const double ny = n01(rng);
      t.position += sigma * Vec2(nx, ny);
    }
  }
  return out;
}

AsvStep step_asv(const Pose& pose, const Trajectory& traj, double elapsed) {
  if (traj.empty()) return {pose, true};
  const bool done = elapsed >= traj.duration();
  return {traj.pose_at(std::clamp(elapsed, 0.0, traj.duration())), done};
}

}  // namespace ipp
