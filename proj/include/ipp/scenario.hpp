#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PlannerKind { TreeSearch, RecedingHorizon, Greedy, Lawnmower, Random };

std::string to_string(PlannerKind k);
PlannerKind parse_planner_kind(const std::string& s);

/// Tracking-utility weight schedule: constant w, or w0 * (1 - t / B).
struct WeightSchedule {
  enum class Mode { Constant, LinearDecay };
  Mode mode = Mode::LinearDecay;
  double value = 5.0;

  bool operator==(const WeightSchedule&) const = default;
};

std::string to_string(const WeightSchedule& w);
/// Accepts "5", "constant:5", "linear_decay:5", "decay:5" and "decay(5)".
WeightSchedule parse_weight_schedule(const std::string& s);

/// Sign convention of the entropy term of the planning utility.
enum class EntropyTerm { Reduction, Literal };
/// Per-cell form of the tracking utility: exp(-2p) or 1 - exp(-2p).
enum class TrackingForm { Literal, Complementary };
/// How overlapping predicted kernels combine.
enum class KernelCombine { Max, SumClamp };

struct SensorModelParams {
  double a = 0.1;         // positive-model slope, 1/m
  double d = 40.0;        // positive-model midpoint, m
  double a_prime = -0.018;
  double d_prime = 35.0;
  double max_range = 35.0;
  double horizontal_fov = deg2rad(72.0);
  double miss_rate = 0.0;

  bool operator==(const SensorModelParams&) const = default;
};

struct MapConfig {
  double width = 100.0;
  double height = 100.0;
  double cell_dx = 1.0;
  double cell_dy = 1.0;

  bool operator==(const MapConfig&) const = default;
};

struct TargetConfig {
  int count = 8;
  double process_noise_std = 0.02;  // m per sqrt(s)
  std::vector<Vec2> spawn;          // explicit spawn positions; empty = uniform

  bool operator==(const TargetConfig&) const = default;
};

struct WindConfig {
  double mean_speed = 8.0;
  double mean_dir = 0.0;
  double time_constant = 20.0;
  double speed_noise_std = 0.5;
  double dir_noise_std = 0.05;
  double gamma = 0.03;
  // Monte-Carlo trials redraw the mean speed uniformly from this range and,
  // when randomize_dir is set, the mean direction uniformly on the circle.
  double speed_min = 6.0;
  double speed_max = 10.0;
  bool randomize_dir = true;

  bool operator==(const WindConfig&) const = default;
};

struct AsvConfig {
  double speed = 1.5;
  std::optional<Vec2> start;  // default: map center
  double start_heading = 0.0;

  bool operator==(const AsvConfig&) const = default;
};

struct MappingConfig {
  double alpha = 0.9;
  double beta = 0.1;
  double p_low = 0.15;
  double p_high = 0.9;
  bool prediction_step = true;

  bool operator==(const MappingConfig&) const = default;
};

struct PredictorConfig {
  double calm_threshold = 0.1;  // m/s
  KernelCombine combine = KernelCombine::Max;

  bool operator==(const PredictorConfig&) const = default;
};

struct PlannerConfig {
  PlannerKind kind = PlannerKind::TreeSearch;
  double horizon = 25.0;
  WeightSchedule weight;
  EntropyTerm entropy_term = EntropyTerm::Reduction;
  TrackingForm tracking_form = TrackingForm::Literal;
  double prediction_interval = 5.0;
  int depth = 1;
  std::vector<double> heading_changes_deg{-60, -40, -20, 0, 20, 40, 60};
  int receding_waypoints = 3;
  double replan_stall = 0.0;  // mission seconds charged per replan
  double max_curvature = 0.5;  // 1/m
  double lawnmower_spacing_factor = 0.8;

  bool operator==(const PlannerConfig&) const = default;
};

struct MissionConfig {
  double budget = 250.0;
  double dt = 1.0;

  bool operator==(const MissionConfig&) const = default;
};

struct MetricsConfig {
  double sigma_g = 2.0;  // cells

  bool operator==(const MetricsConfig&) const = default;
};

struct OutputConfig {
  double snapshot_every = 0.0;  // seconds; 0 disables snapshots

  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  MapConfig map;
  TargetConfig targets;
  WindConfig wind;
  AsvConfig asv;
  SensorModelParams sensor;
  MappingConfig mapping;
  PredictorConfig predictor;
  PlannerConfig planner;
  MissionConfig mission;
  MetricsConfig metrics;
  OutputConfig output;
  std::uint64_t rng_seed = 1;

  int rows() const;
  int cols() const;
  Vec2 asv_start() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Returns every violated invariant as "field: rule". Empty iff valid.
std::vector<std::string> validate(const ScenarioConfig& config);

/// Throws ConfigError listing all violations.
void require_valid(const ScenarioConfig& config);

/// Serialized config in the documented YAML schema. Deterministic.
std::string serialize_config(const ScenarioConfig& config);
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Applies one "section.key=value" override.
void apply_override(ScenarioConfig& config, const std::string& assignment);

struct WindState {
  double speed = 0.0;  // v_w >= 0
  double dir = 0.0;    // direction the wind blows toward, (-pi, pi]

  bool operator==(const WindState&) const = default;
};

struct TargetState {
  int id = 0;
  Vec2 position = Vec2::Zero();

  bool operator==(const TargetState&) const = default;
};

struct World {
  std::vector<TargetState> targets;
  WindState wind;
  Pose asv;
  double clock = 0.0;

  bool operator==(const World&) const = default;
};

World build_world(const ScenarioConfig& config, std::uint64_t seed);

/// Per-trial variation for Monte-Carlo sweeps: mean wind speed drawn from
/// [speed_min, speed_max] and (optionally) a uniform mean direction.
ScenarioConfig sample_trial_config(const ScenarioConfig& base, std::uint64_t seed);

}  // namespace ipp
