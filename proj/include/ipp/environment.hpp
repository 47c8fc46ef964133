#pragma once

#include <vector>

#include "ipp/rng.hpp"
#include "ipp/scenario.hpp"
#include "ipp/trajectory.hpp"

namespace ipp {

/// Mean-reverting first-order Gauss-Markov wind update.
WindState step_wind(const WindState& wind, const WindConfig& config, double dt, Engine& rng);

/// Wind drift of one step: (gamma v cos psi dt, gamma v sin psi dt).
Vec2 drift(const WindState& wind, double gamma, double dt);

/// Translates every target by the wind drift plus optional process noise.
/// Targets leaving the map are retained.
std::vector<TargetState> step_targets(const std::vector<TargetState>& targets,
                                      const WindState& wind, const ScenarioConfig& config,
                                      double dt, Engine& rng);

struct AsvStep {
  Pose pose;
  bool completed = false;
};

/// ASV pose `elapsed` seconds into `traj`; past the end, returns the final
/// pose with `completed` set. An empty trajectory holds `pose`.
AsvStep step_asv(const Pose& pose, const Trajectory& traj, double elapsed);

}  // namespace ipp
