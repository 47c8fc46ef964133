#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ipp/mapping.hpp"
#include "ipp/predictor.hpp"
#include "ipp/rng.hpp"
#include "ipp/trajectory.hpp"

namespace ipp {

struct UtilityBreakdown {
  double entropy_term = 0.0;   // bits
  double tracking_term = 0.0;  // fov-averaged, step-averaged J
  double w = 0.0;
  double total = 0.0;          // entropy_term + w * tracking_term

  bool operator==(const UtilityBreakdown&) const = default;
};

struct Candidate {
  int index = 0;
  double heading_change = 0.0;  // radians, relative to the current heading
  Trajectory trajectory;
};

/// Fan of Bezier candidates, one per configured net heading change, spanning
/// speed * horizon meters. Paths leaving the map are cut at the boundary and
/// refitted; a path cut to almost nothing is re-aimed at the map center.
/// Throws ContractError for a pose outside the map.
std::vector<Candidate> candidate_paths(const Pose& pose, const ScenarioConfig& config);

/// Steps a copy of the map along `traj` at dt: prediction step with frozen
/// wind, then the most-likely-measurement update at each pose.
OccupancyGrid forward_simulate(OccupancyGrid snapshot, const Trajectory& traj,
                               const WindState& wind, const ScenarioConfig& config);

/// Same, for an explicit list of timed poses (the t = 0 pose is skipped).
OccupancyGrid forward_simulate(OccupancyGrid snapshot, const std::vector<TimedPose>& poses,
                               const WindState& wind, const ScenarioConfig& config);

/// Prediction instants k * interval, k = 1 .. floor(duration / interval).
std::vector<double> prediction_times(double duration, double interval);

/// Fov-averaged tracking reward of one pose against one predicted grid.
double tracking_reward(const Pose& pose, const PredictedGrid& prediction,
                       const SensorModelParams& sensor, TrackingForm form);

/// Mean tracking reward over the prediction steps of `traj`; `predictions`
/// must hold one grid per prediction_times() entry (std::invalid_argument otherwise).
double tracking_utility(const Trajectory& traj, const std::vector<PredictedGrid>& predictions,
                        const ScenarioConfig& config);

/// Tracking-term weight at mission time t_now.
double weight_schedule(const WeightSchedule& schedule, double t_now, double budget);

/// Lazily evaluated predictions from one binarized snapshot of the live map.
class PredictionCache {
 public:
  PredictionCache(const OccupancyGrid& live, const WindState& wind, const ScenarioConfig& config);
  const PredictedGrid& at(double t);

 private:
  BinaryTargetGrid targets_;
  WindState wind_;
  double gamma_;
  PredictorConfig predictor_;
  std::map<double, PredictedGrid> cache_;
};

UtilityBreakdown utility(const Trajectory& traj, const OccupancyGrid& live, const WindState& wind,
                         double t_now, const ScenarioConfig& config);

UtilityBreakdown utility(const Trajectory& traj, const OccupancyGrid& live, double live_entropy,
                         const WindState& wind, double t_now, const ScenarioConfig& config,
                         PredictionCache& predictions);

/// Utility of a path judged only at its final pose (single forward-simulated
/// measurement, single prediction at the path duration).
UtilityBreakdown greedy_utility(const Trajectory& traj, const OccupancyGrid& live,
                                double live_entropy, const WindState& wind, double t_now,
                                const ScenarioConfig& config, PredictionCache& predictions);

struct CandidateRecord {
  int index = 0;
  double heading_change = 0.0;
  UtilityBreakdown utility;

  bool operator==(const CandidateRecord&) const = default;
};

struct PlannerDecision {
  double t = 0.0;
  int chosen = -1;
  std::vector<CandidateRecord> candidates;
  double eval_ms = 0.0;  // wall clock; excluded from equality and checksums

  bool operator==(const PlannerDecision& o) const {
    return t == o.t && chosen == o.chosen && candidates == o.candidates;
  }
};

struct PlanResult {
  Trajectory trajectory;
  PlannerDecision decision;
};

/// Index of the best total; ties go to the smallest |heading change|, then
/// the lowest index.
int select_best(const std::vector<CandidateRecord>& records);

/// Boustrophedon over the whole map with tracks along x, spaced
/// spacing_factor * max_range apart, entered at the pattern corner nearest
/// to `pose` and repeated until it spans the mission budget.
Trajectory lawnmower_path(const Pose& pose, const ScenarioConfig& config);

/// One planning decision for the configured planner kind. `rng` is only used
/// by the random planner.
PlanResult plan(const OccupancyGrid& live, const Pose& pose, const WindState& wind, double t_now,
                const ScenarioConfig& config, Engine& rng);

}  // namespace ipp
