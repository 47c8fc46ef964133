#include "ipp/harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "ipp/environment.hpp"
#include "ipp/grid_io.hpp"
#include "ipp/mapping.hpp"
#include "ipp/predictor.hpp"
#include "ipp/rng.hpp"
#include "ipp/text.hpp"

namespace ipp {

std::uint64_t config_hash(const ScenarioConfig& config) {
  return fnv1a64(serialize_config(config));
}

EpisodeTrace run_episode(const ScenarioConfig& config, std::uint64_t seed) {
  require_valid(config);
  const RngStreams streams(seed);
  Engine wind_rng = streams.stream("wind");
  Engine target_rng = streams.stream("targets");
  Engine perception_rng = streams.stream("perception");
  Engine planner_rng = streams.stream("planner");

  World world = build_world(config, seed);
  OccupancyGrid grid = OccupancyGrid::from_config(config);
  const PredictionParams pp = prediction_params(config);
  const double dt = config.mission.dt;
  const double budget = config.mission.budget;
  const auto n_steps = static_cast<long>(std::ceil(budget / dt - 1e-9));

  EpisodeTrace trace;
  trace.config_hash = config_hash(config);
  trace.seed = seed;
  trace.planner = to_string(config.planner.kind);
  trace.rows = grid.rows();
  trace.cols = grid.cols();

  Trajectory traj;
  Pose traj_start = world.asv;
  double elapsed = 0.0;
  double stall = 0.0;
  bool completed = true;
  bool planned_once = false;
  std::vector<int> history;
  double next_snapshot = config.output.snapshot_every;

  for (long k = 0; k < n_steps; ++k) {
    try {
      StepRecord rec;
      const bool open_loop = config.planner.kind == PlannerKind::Lawnmower;
      if (completed && !(open_loop && planned_once)) {
        PlanResult res = plan(grid, world.asv, world.wind, world.clock, config, planner_rng);
        traj = std::move(res.trajectory);
        traj_start = world.asv;
        trace.decisions.push_back(std::move(res.decision));
        elapsed = 0.0;
        stall = config.planner.replan_stall;
        completed = traj.empty();
        planned_once = true;
        rec.replanned = true;
      }

      // Sense and map.
      const Pose observed = world.asv;
      std::vector<Detection> dets =
          simulate_detections(world, observed, config.sensor, config.map, perception_rng);
      update_estimation(grid, dets, observed, config.sensor);
      if (config.mapping.prediction_step) update_prediction(grid, world.wind, dt, pp);

      // Act.
      if (stall > 0.0) {
        stall -= dt;
      } else if (!completed) {
        elapsed += dt;
        const AsvStep s = step_asv(traj_start, traj, elapsed);
        world.asv = s.pose;
        completed = s.completed;
      }
      world.targets = step_targets(world.targets, world.wind, config, dt, target_rng);
      world.wind = step_wind(world.wind, config.wind, dt, wind_rng);
      world.clock = static_cast<double>(k + 1) * dt;

      history.push_back(static_cast<int>(dets.size()));
      const GroundTruthGrid truth = ground_truth(grid.geometry(), world.targets);
      rec.t = world.clock;
      rec.asv = observed;
      rec.wind = world.wind;
      rec.targets = world.targets;
      rec.detections = std::move(dets);
      rec.metrics = {world.clock, mean_entropy(grid), mse(grid, truth, config.metrics.sigma_g),
                     history.back(), mean_detections(history)};
      trace.steps.push_back(std::move(rec));

      if (next_snapshot > 0.0 && world.clock + 1e-9 >= next_snapshot) {
        trace.snapshots.push_back({world.clock, raster_of(grid)});
        next_snapshot += config.output.snapshot_every;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("step " + std::to_string(k) + " (t=" +
                               format_double(world.clock) + "): " + e.what());
    }
  }
  return trace;
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& base, int n_trials, std::uint64_t seed0,
                                 int workers, const std::string& label) {
  if (n_trials < 1) throw std::invalid_argument("run_monte_carlo: n_trials must be >= 1");
  require_valid(base);
  const auto n = static_cast<std::size_t>(n_trials);

  MonteCarloResult out;
  out.seeds.resize(n);
  out.trial_configs.resize(n);
  out.traces.resize(n);
  std::vector<std::string> errors(n);
  std::vector<char> failed(n, 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const std::uint64_t seed = seed0 + i;
      out.seeds[i] = seed;
      try {
        out.trial_configs[i] = sample_trial_config(base, seed);
        out.traces[i] = run_episode(out.trial_configs[i], seed);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        failed[i] = 1;
      }
    }
  };

  const int threads = std::max(1, std::min(workers, n_trials));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (failed[i]) throw TrialError(seed0 + i, errors[i]);
  }

  std::vector<std::vector<MetricSample>> series;
  series.reserve(n);
  for (const auto& t : out.traces) series.push_back(t.metrics());
  out.summary = aggregate(series, label);
  return out;
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

void write_bundle(const std::filesystem::path& dir, const ScenarioConfig& base,
                  const MonteCarloResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "trials");
  fs::create_directories(dir / "decisions");
  fs::create_directories(dir / "traces");

  write_text(dir / "config.yaml", serialize_config(base));

  std::ofstream summary(dir / "summary.csv");
  write_summary_header(summary);
  write_summary_row(summary, result.summary);

  std::ofstream curve(dir / "curve.csv");
  write_curve_csv(curve, result.summary);

  std::ofstream all(dir / "metrics.csv");
  write_metrics_header(all);

  const GridGeometry geometry = geometry_of(base);
  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    const auto& trace = result.traces[i];
    const std::string stem = "seed_" + std::to_string(trace.seed);
    const auto samples = trace.metrics();
    write_metrics_rows(all, trace.seed, samples);

    std::ofstream per(dir / "trials" / (stem + ".csv"));
    write_metrics_header(per);
    write_metrics_rows(per, trace.seed, samples);

    std::ofstream dec(dir / "decisions" / (stem + ".csv"));
    write_decisions_csv(dec, trace.decisions);

    write_trace(dir / "traces" / (stem + ".jsonl"), trace);

    if (!trace.snapshots.empty()) {
      const fs::path sdir = dir / "snapshots" / stem;
      fs::create_directories(sdir);
      for (const auto& s : trace.snapshots) {
        write_snapshot(sdir / ("t_" + format_double(s.t)), s.raster, geometry, s.t);
      }
    }
  }
}

}  // namespace ipp
