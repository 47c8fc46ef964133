#include "ipp/scenario.hpp"

#include <cmath>
#include <numbers>
#include "ipp/text.hpp"

#include "ipp/rng.hpp"

namespace ipp {

std::string to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::TreeSearch: return "tree_search";
    case PlannerKind::RecedingHorizon: return "receding_horizon";
    case PlannerKind::Greedy: return "greedy";
    case PlannerKind::Lawnmower: return "lawnmower";
    case PlannerKind::Random: return "random";
  }
  return "?";
}

PlannerKind parse_planner_kind(const std::string& s) {
  if (s == "tree_search") return PlannerKind::TreeSearch;
  if (s == "receding_horizon") return PlannerKind::RecedingHorizon;
  if (s == "greedy") return PlannerKind::Greedy;
  if (s == "lawnmower") return PlannerKind::Lawnmower;
  if (s == "random") return PlannerKind::Random;
  throw ConfigError("unknown planner kind '" + s + "'");
}

std::string to_string(const WeightSchedule& w) {
  const std::string prefix =
      w.mode == WeightSchedule::Mode::Constant ? "constant:" : "linear_decay:";
  return prefix + format_double(w.value);
}

WeightSchedule parse_weight_schedule(const std::string& s) {
  WeightSchedule w;
  std::string number = s;
  w.mode = WeightSchedule::Mode::Constant;
  if (s.size() > 7 && s.rfind("decay(", 0) == 0 && s.back() == ')') {
    w.mode = WeightSchedule::Mode::LinearDecay;
    number = s.substr(6, s.size() - 7);
  } else if (const auto colon = s.find(':'); colon != std::string::npos) {
    const std::string mode = s.substr(0, colon);
    number = s.substr(colon + 1);
    if (mode == "constant") {
      w.mode = WeightSchedule::Mode::Constant;
    } else if (mode == "linear_decay" || mode == "decay") {
      w.mode = WeightSchedule::Mode::LinearDecay;
    } else {
      throw ConfigError("unknown weight schedule mode '" + mode + "'");
    }
  }
  try {
    std::size_t used = 0;
    w.value = std::stod(number, &used);
    if (used != number.size()) throw std::invalid_argument(number);
  } catch (const std::exception&) {
    throw ConfigError("bad weight schedule value '" + s + "'");
  }
  return w;
}

int ScenarioConfig::rows() const {
  return static_cast<int>(std::lround(map.height / map.cell_dy));
}

int ScenarioConfig::cols() const {
  return static_cast<int>(std::lround(map.width / map.cell_dx));
}

Vec2 ScenarioConfig::asv_start() const {
  return asv.start.value_or(Vec2(map.width / 2.0, map.height / 2.0));
}

namespace {

bool is_multiple(double length, double cell) {
  if (!(cell > 0.0) || !(length > 0.0)) return false;
  const double n = length / cell;
  return std::abs(n - std::round(n)) < 1e-9 && std::round(n) >= 1.0;
}

bool inside(const MapConfig& m, const Vec2& p) {
  return p.x() >= 0.0 && p.x() <= m.width && p.y() >= 0.0 && p.y() <= m.height;
}

}  // namespace

std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> v;
  auto check = [&v](bool ok, const char* what) {
    if (!ok) v.emplace_back(what);
  };

  check(is_multiple(c.map.width, c.map.cell_dx), "map.width: multiple of cell_dx>0");
  check(is_multiple(c.map.height, c.map.cell_dy), "map.height: multiple of cell_dy>0");
  check(c.targets.count >= 0, "targets.count: >=0");
  check(c.targets.spawn.empty() ||
            static_cast<int>(c.targets.spawn.size()) == c.targets.count,
        "targets.spawn: one position per target");
  for (const auto& p : c.targets.spawn) {
    if (!inside(c.map, p)) {
      v.emplace_back("targets.spawn: inside map bounds");
      break;
    }
  }
  check(c.targets.process_noise_std >= 0.0, "targets.process_noise_std: >=0");

  check(c.wind.mean_speed >= 0.0, "wind.mean_speed: >=0");
  check(c.wind.time_constant > 0.0, "wind.time_constant: >0");
  check(c.wind.speed_noise_std >= 0.0, "wind.speed_noise_std: >=0");
  check(c.wind.dir_noise_std >= 0.0, "wind.dir_noise_std: >=0");
  check(c.wind.gamma > 0.0, "wind.gamma: gamma>0");
  check(c.wind.speed_min >= 0.0 && c.wind.speed_min <= c.wind.speed_max,
        "wind.speed_min: 0<=speed_min<=speed_max");

  check(c.asv.speed > 0.0, "asv.speed: >0");
  check(inside(c.map, c.asv_start()), "asv.start: inside map bounds");

  check(c.sensor.max_range > 0.0, "sensor.max_range: >0");
  check(c.sensor.horizontal_fov > 0.0 &&
            c.sensor.horizontal_fov <= 2.0 * std::numbers::pi + 1e-12,
        "sensor.horizontal_fov: 0<fov<=2pi");
  check(c.sensor.miss_rate >= 0.0 && c.sensor.miss_rate <= 1.0,
        "sensor.miss_rate: in [0,1]");

  const auto& m = c.mapping;
  check(m.p_low > 0.0 && m.p_low < 0.5, "mapping.p_low: 0<p_low<0.5");
  check(m.p_high > 0.5 && m.p_high < 1.0, "mapping.p_high: 0.5<p_high<1");
  check(std::abs(m.alpha + m.beta - 1.0) < 1e-9, "mapping.alpha: alpha+beta≠1");
  check(m.alpha > 0.0 && m.alpha <= 1.0, "mapping.alpha: alpha in (0,1]");

  check(c.predictor.calm_threshold >= 0.0, "predictor.calm_threshold: >=0");

  const auto& p = c.planner;
  check(p.horizon > 0.0, "planner.horizon: >0");
  check(p.prediction_interval > 0.0, "planner.prediction_interval: >0");
  check(p.depth == 1 || p.depth == 2, "planner.depth: 1 or 2");
  check(!p.heading_changes_deg.empty(), "planner.heading_changes_deg: nonempty");
  check(p.receding_waypoints >= 1 && p.receding_waypoints <= 5,
        "planner.receding_waypoints: in [1,5]");
  check(p.replan_stall >= 0.0, "planner.replan_stall: >=0");
  check(p.max_curvature > 0.0, "planner.max_curvature: >0");
  check(p.lawnmower_spacing_factor > 0.0, "planner.lawnmower_spacing_factor: >0");
  check(p.weight.value >= 0.0, "planner.weight: w>=0");

  check(c.mission.dt > 0.0, "mission.dt: dt>0");
  check(c.mission.budget >= p.horizon, "mission.budget: budget>=horizon");

  check(c.metrics.sigma_g > 0.0, "metrics.sigma_g: >0");
  check(c.output.snapshot_every >= 0.0, "output.snapshot_every: >=0");
  return v;
}

void require_valid(const ScenarioConfig& config) {
  const auto violations = validate(config);
  if (violations.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw ConfigError(msg);
}

World build_world(const ScenarioConfig& config, std::uint64_t seed) {
  require_valid(config);
  World w;
  const Vec2 start = config.asv_start();
  w.asv = Pose{start.x(), start.y(), wrap_angle(config.asv.start_heading)};
  w.wind = WindState{config.wind.mean_speed, wrap_angle(config.wind.mean_dir)};
  w.clock = 0.0;

  w.targets.reserve(config.targets.count);
  if (!config.targets.spawn.empty()) {
    for (int i = 0; i < config.targets.count; ++i) {
      w.targets.push_back({i, config.targets.spawn[i]});
    }
  } else {
    Engine rng = RngStreams(seed).stream("spawn");
    std::uniform_real_distribution<double> ux(0.0, config.map.width);
    std::uniform_real_distribution<double> uy(0.0, config.map.height);
    for (int i = 0; i < config.targets.count; ++i) {
      const double x = ux(rng);
      const double y = uy(rng);
      w.targets.push_back({i, Vec2(x, y)});
    }
  }
  return w;
}

ScenarioConfig sample_trial_config(const ScenarioConfig& base, std::uint64_t seed) {
  ScenarioConfig c = base;
  Engine rng = RngStreams(seed).stream("scenario");
  std::uniform_real_distribution<double> speed(base.wind.speed_min, base.wind.speed_max);
  c.wind.mean_speed = speed(rng);
  if (base.wind.randomize_dir) {
    std::uniform_real_distribution<double> dir(-std::numbers::pi, std::numbers::pi);
    c.wind.mean_dir = wrap_angle(dir(rng));
  }
  c.rng_seed = seed;
  return c;
}

}  // namespace ipp
