#include "ipp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ipp/environment.hpp"

namespace ipp {

namespace {

constexpr int kWaypoints = 5;

struct Box {
  Vec2 lo;
  Vec2 hi;

  bool contains(const Vec2& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
  Vec2 clamp(const Vec2& p) const {
    return {std::clamp(p.x(), lo.x(), hi.x()), std::clamp(p.y(), lo.y(), hi.y())};
  }
  Vec2 center() const { return 0.5 * (lo + hi); }
};

Box map_box(const ScenarioConfig& config) {
  const Vec2 lo = Vec2::Zero();
  return {lo, lo + Vec2(config.map.width, config.map.height)};
}

// Start point followed by kWaypoints points; chord k has heading
// psi + (k - 1/2) * delta / kWaypoints.
std::vector<Vec2> fan_polyline(const Vec2& start, double psi, double delta, double length) {
  std::vector<Vec2> pts{start};
  const double chord = length / kWaypoints;
  for (int k = 1; k <= kWaypoints; ++k) {
    const double h = psi + (k - 0.5) * delta / kWaypoints;
    pts.push_back(pts.back() + chord * Vec2(std::cos(h), std::sin(h)));
  }
  return pts;
}

// Prefix of `pts` up to where it first leaves `box`.
std::vector<Vec2> clip_polyline(const std::vector<Vec2>& pts, const Box& box) {
  std::vector<Vec2> out{pts.front()};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Vec2 a = out.back();
    const Vec2 b = pts[i];
    if (box.contains(b)) {
      out.push_back(b);
      continue;
    }
    double tau = 1.0;
    for (int axis = 0; axis < 2; ++axis) {
      const double d = b[axis] - a[axis];
      if (b[axis] > box.hi[axis]) tau = std::min(tau, (box.hi[axis] - a[axis]) / d);
      if (b[axis] < box.lo[axis]) tau = std::min(tau, (box.lo[axis] - a[axis]) / d);
    }
    tau = std::clamp(tau, 0.0, 1.0);
    out.push_back(box.clamp(a + tau * (b - a)));
    break;
  }
  return out;
}

double polyline_length(const std::vector<Vec2>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

// n points at equal arc-length fractions k/n, k = 1..n.
std::vector<Vec2> resample(const std::vector<Vec2>& pts, int n) {
  const double total = polyline_length(pts);
  std::vector<Vec2> out;
  std::size_t seg = 1;
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double target = total * k / n;
    while (seg + 1 < pts.size() && acc + (pts[seg] - pts[seg - 1]).norm() < target) {
      acc += (pts[seg] - pts[seg - 1]).norm();
      ++seg;
    }
    if (pts.size() < 2) {
      out.push_back(pts.front());
      continue;
    }
    const double len = (pts[seg] - pts[seg - 1]).norm();
    const double f = len > 0.0 ? std::clamp((target - acc) / len, 0.0, 1.0) : 1.0;
    out.push_back(pts[seg - 1] + f * (pts[seg] - pts[seg - 1]));
  }
  out.back() = pts.back();
  return out;
}

Trajectory smooth_through(const Vec2& start, const std::vector<Vec2>& waypoints, double speed,
                          double heading, const Box& box) {
  std::vector<Vec2> dense = fit_quartic_bezier(start, waypoints);
  for (auto& p : dense) p = box.clamp(p);
  return Trajectory::from_polyline(std::move(dense), speed, heading, waypoints);
}

Candidate build_candidate(const Pose& pose, int index, double delta, const ScenarioConfig& config,
                          const Box& box) {
  const double speed = config.asv.speed;
  const double length = speed * config.planner.horizon;
  const double min_length = std::max(2.0 * speed * config.mission.dt, 0.25 * length);
  const Vec2 start = pose.position();

  std::vector<Vec2> cut = clip_polyline(fan_polyline(start, pose.psi, delta, length), box);
  if (polyline_length(cut) < min_length) {
    // Turn back into the map.
    const Vec2 to_center = box.center() - start;
    const double psi_c = to_center.norm() > 0.0 ? std::atan2(to_center.y(), to_center.x()) : pose.psi;
    cut = clip_polyline(fan_polyline(start, psi_c, delta, length), box);
  }

  Candidate c;
  c.index = index;
  c.heading_change = delta;
  if (polyline_length(cut) <= 0.0) {
    c.trajectory = Trajectory::from_polyline({start}, speed, pose.psi);
    return c;
  }
  c.trajectory = smooth_through(start, resample(cut, kWaypoints), speed, pose.psi, box);
  return c;
}

double entropy_term(double prior, double posterior, EntropyTerm mode) {
  return mode == EntropyTerm::Reduction ? prior - posterior : posterior - prior;
}

UtilityBreakdown combine(double entropy, double tracking, double w) {
  return {entropy, tracking, w, entropy + w * tracking};
}

std::vector<CandidateRecord> evaluate(const std::vector<Candidate>& candidates,
                                      const OccupancyGrid& live, double live_entropy,
                                      const WindState& wind, double t_now,
                                      const ScenarioConfig& config, PredictionCache& cache,
                                      bool greedy) {
  std::vector<CandidateRecord> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const UtilityBreakdown u =
        greedy ? greedy_utility(c.trajectory, live, live_entropy, wind, t_now, config, cache)
               : utility(c.trajectory, live, live_entropy, wind, t_now, config, cache);
    out.push_back({c.index, c.heading_change, u});
  }
  return out;
}

Trajectory random_path(const Pose& pose, const ScenarioConfig& config, Engine& rng) {
  const Box box = map_box(config);
  const double speed = config.asv.speed;
  const double length = speed * config.planner.horizon;
  const Vec2 start = pose.position();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec2 goal = box.center();
  for (int attempt = 0; attempt < 256; ++attempt) {
    // Uniform over the disc of radius `length`.
    const double r = length * std::sqrt(unit(rng));
    const double th = 2.0 * std::numbers::pi * unit(rng);
    const Vec2 p = start + r * Vec2(std::cos(th), std::sin(th));
    if (r >= 0.25 * length && box.contains(p)) {
      goal = p;
      break;
    }
  }
  if ((goal - start).norm() <= 0.0) return Trajectory::from_polyline({start}, speed, pose.psi);

  // Quadratic Bezier leaving along the current heading.
  const double d = (goal - start).norm();
  const Vec2 ctrl = box.clamp(start + 0.5 * d * Vec2(std::cos(pose.psi), std::sin(pose.psi)));
  std::vector<Vec2> wps;
  for (int k = 1; k <= kWaypoints; ++k) {
    const double u = static_cast<double>(k) / kWaypoints;
    wps.push_back((1 - u) * (1 - u) * start + 2 * u * (1 - u) * ctrl + u * u * goal);
  }
  return smooth_through(start, wps, speed, pose.psi, box);
}

}  // namespace

std::vector<Candidate> candidate_paths(const Pose& pose, const ScenarioConfig& config) {
  const Box box = map_box(config);
  if (!box.contains(pose.position())) throw ContractError("pose outside the map");

  std::vector<Candidate> all;
  const auto& deltas = config.planner.heading_changes_deg;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    all.push_back(build_candidate(pose, static_cast<int>(i), deg2rad(deltas[i]), config, box));
  }

  std::vector<Candidate> feasible;
  for (const auto& c : all) {
    if (c.trajectory.max_curvature() <= config.planner.max_curvature) feasible.push_back(c);
  }
  return feasible.empty() ? all : feasible;
}

OccupancyGrid forward_simulate(OccupancyGrid snapshot, const Trajectory& traj,
                               const WindState& wind, const ScenarioConfig& config) {
  if (traj.empty()) return snapshot;
  return forward_simulate(std::move(snapshot), traj.sample(config.mission.dt), wind, config);
}

OccupancyGrid forward_simulate(OccupancyGrid snapshot, const std::vector<TimedPose>& poses,
                               const WindState& wind, const ScenarioConfig& config) {
  const PredictionParams pp = prediction_params(config);
  for (std::size_t k = 1; k < poses.size(); ++k) {
    const double dt = poses[k].t - poses[k - 1].t;
    if (config.mapping.prediction_step && dt > 0.0) update_prediction(snapshot, wind, dt, pp);
    update_expected_measurement(snapshot, poses[k].pose, config.sensor);
  }
  return snapshot;
}

std::vector<double> prediction_times(double duration, double interval) {
  std::vector<double> out;
  if (!(interval > 0.0)) return out;
  const auto n = static_cast<long>(std::floor(duration / interval + 1e-9));
  for (long k = 1; k <= n; ++k) out.push_back(static_cast<double>(k) * interval);
  return out;
}

double tracking_reward(const Pose& pose, const PredictedGrid& prediction,
                       const SensorModelParams& sensor, TrackingForm form) {
  const auto cells = fov_cells(prediction.geometry, pose, sensor);
  if (cells.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : cells) {
    const double e = std::exp(-2.0 * prediction.at(c.row, c.col));
    sum += form == TrackingForm::Literal ? e : 1.0 - e;
  }
  return sum / static_cast<double>(cells.size());
}

double tracking_utility(const Trajectory& traj, const std::vector<PredictedGrid>& predictions,
                        const ScenarioConfig& config) {
  const auto times = prediction_times(traj.duration(), config.planner.prediction_interval);
  if (predictions.size() != times.size()) {
    throw std::invalid_argument("tracking_utility: expected " + std::to_string(times.size()) +
                                " predicted grids, got " + std::to_string(predictions.size()));
  }
  if (times.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    sum += tracking_reward(traj.pose_at(times[k]), predictions[k], config.sensor,
                           config.planner.tracking_form);
  }
  return sum / static_cast<double>(times.size());
}

double weight_schedule(const WeightSchedule& schedule, double t_now, double budget) {
  if (schedule.mode == WeightSchedule::Mode::Constant) return schedule.value;
  const double t = std::clamp(t_now, 0.0, budget);
  return schedule.value * (1.0 - t / budget);
}

PredictionCache::PredictionCache(const OccupancyGrid& live, const WindState& wind,
                                 const ScenarioConfig& config)
    : targets_(binarize(live)), wind_(wind), gamma_(config.wind.gamma),
      predictor_(config.predictor) {}

const PredictedGrid& PredictionCache::at(double t) {
  auto it = cache_.find(t);
  if (it == cache_.end()) it = cache_.emplace(t, predict(targets_, wind_, t, gamma_, predictor_)).first;
  return it->second;
}

UtilityBreakdown utility(const Trajectory& traj, const OccupancyGrid& live, const WindState& wind,
                         double t_now, const ScenarioConfig& config) {
  PredictionCache cache(live, wind, config);
  return utility(traj, live, mean_entropy(live), wind, t_now, config, cache);
}

UtilityBreakdown utility(const Trajectory& traj, const OccupancyGrid& live, double live_entropy,
                         const WindState& wind, double t_now, const ScenarioConfig& config,
                         PredictionCache& predictions) {
  const double w = weight_schedule(config.planner.weight, t_now, config.mission.budget);
  if (traj.empty()) return {0.0, 0.0, w, 0.0};

  const OccupancyGrid post = forward_simulate(live, traj, wind, config);
  const double ent = entropy_term(live_entropy, mean_entropy(post), config.planner.entropy_term);

  std::vector<PredictedGrid> grids;
  for (double t : prediction_times(traj.duration(), config.planner.prediction_interval)) {
    grids.push_back(predictions.at(t));
  }
  return combine(ent, tracking_utility(traj, grids, config), w);
}

UtilityBreakdown greedy_utility(const Trajectory& traj, const OccupancyGrid& live,
                                double live_entropy, const WindState& wind, double t_now,
                                const ScenarioConfig& config, PredictionCache& predictions) {
  const double w = weight_schedule(config.planner.weight, t_now, config.mission.budget);
  if (traj.empty()) return {0.0, 0.0, w, 0.0};

  const double dur = traj.duration();
  const Pose end = traj.pose_at(dur);
  const std::vector<TimedPose> poses{{traj.pose_at(0.0), 0.0}, {end, dur}};
  const OccupancyGrid post = forward_simulate(live, poses, wind, config);
  const double ent = entropy_term(live_entropy, mean_entropy(post), config.planner.entropy_term);
  const double track =
      tracking_reward(end, predictions.at(dur), config.sensor, config.planner.tracking_form);
  return combine(ent, track, w);
}

int select_best(const std::vector<CandidateRecord>& records) {
  int best = -1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (best < 0) {
      best = static_cast<int>(i);
      continue;
    }
    const auto& a = records[i];
    const auto& b = records[static_cast<std::size_t>(best)];
    const bool better =
        a.utility.total > b.utility.total ||
        (a.utility.total == b.utility.total &&
         (std::abs(a.heading_change) < std::abs(b.heading_change) ||
          (std::abs(a.heading_change) == std::abs(b.heading_change) && a.index < b.index)));
    if (better) best = static_cast<int>(i);
  }
  return best;
}

Trajectory lawnmower_path(const Pose& pose, const ScenarioConfig& config) {
  const Box box = map_box(config);
  const double spacing = config.planner.lawnmower_spacing_factor * config.sensor.max_range;
  const double inset = std::min(config.map.cell_dx, config.map.cell_dy);
  const double x_lo = box.lo.x() + inset;
  const double x_hi = box.hi.x() - inset;

  std::vector<double> ys;
  for (double y = box.lo.y() + 0.5 * spacing; y <= box.hi.y(); y += spacing) ys.push_back(y);
  if (ys.empty()) ys.push_back(box.center().y());

  // Four ways to enter the pattern; pick the corner nearest to the ASV.
  std::vector<Vec2> best;
  double best_dist = 0.0;
  for (int flip_y = 0; flip_y < 2; ++flip_y) {
    for (int flip_x = 0; flip_x < 2; ++flip_x) {
      std::vector<double> rows = ys;
      if (flip_y) std::reverse(rows.begin(), rows.end());
      std::vector<Vec2> pattern;
      bool left = flip_x == 0;
      for (double y : rows) {
        pattern.emplace_back(left ? x_lo : x_hi, y);
        pattern.emplace_back(left ? x_hi : x_lo, y);
        left = !left;
      }
      const double d = (pattern.front() - pose.position()).norm();
      if (best.empty() || d < best_dist) {
        best = pattern;
        best_dist = d;
      }
    }
  }

  std::vector<Vec2> pts{pose.position()};
  const double needed = config.asv.speed * config.mission.budget;
  std::vector<Vec2> pass = best;
  while (polyline_length(pts) < needed) {
    pts.insert(pts.end(), pass.begin(), pass.end());
    std::reverse(pass.begin(), pass.end());
  }
  std::vector<Vec2> corners(pts.begin() + 1, pts.end());
  return Trajectory::from_polyline(std::move(pts), config.asv.speed, pose.psi, std::move(corners));
}

PlanResult plan(const OccupancyGrid& live, const Pose& pose, const WindState& wind, double t_now,
                const ScenarioConfig& config, Engine& rng) {
  const auto started = std::chrono::steady_clock::now();
  PlanResult result;
  result.decision.t = t_now;
  const PlannerKind kind = config.planner.kind;

  if (kind == PlannerKind::Lawnmower) {
    result.trajectory = lawnmower_path(pose, config);
  } else if (kind == PlannerKind::Random) {
    result.trajectory = random_path(pose, config, rng);
  } else {
    const double h0 = mean_entropy(live);
    PredictionCache cache(live, wind, config);
    const auto candidates = candidate_paths(pose, config);
    const bool greedy = kind == PlannerKind::Greedy;

    if (kind == PlannerKind::TreeSearch && config.planner.depth >= 2) {
      // Each first leg is scored by its best continuation.
      std::vector<Trajectory> best_seq;
      for (const auto& first : candidates) {
        const Trajectory& leg = first.trajectory;
        const Pose end = leg.pose_at(leg.duration());
        std::vector<Candidate> seqs;
        for (auto second : candidate_paths(end, config)) {
          second.trajectory = leg.then(second.trajectory);
          seqs.push_back(std::move(second));
        }
        const auto recs = evaluate(seqs, live, h0, wind, t_now, config, cache, false);
        const int b = select_best(recs);
        result.decision.candidates.push_back(
            {first.index, first.heading_change, recs[static_cast<std::size_t>(b)].utility});
      }
    } else {
      result.decision.candidates = evaluate(candidates, live, h0, wind, t_now, config, cache, greedy);
    }

    const int best = select_best(result.decision.candidates);
    result.decision.chosen = result.decision.candidates[static_cast<std::size_t>(best)].index;
    const Trajectory& chosen = candidates[static_cast<std::size_t>(best)].trajectory;

    if (kind == PlannerKind::RecedingHorizon) {
      const auto keep = static_cast<std::size_t>(config.planner.receding_waypoints);
      result.trajectory =
          chosen.truncated(chosen.arc_length() * static_cast<double>(keep) / kWaypoints, keep);
    } else {
      result.trajectory = chosen;
    }
  }

  result.decision.eval_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace ipp
