// ipp_sim: single episodes, Monte-Carlo sweeps, predictor datasets, trace replay.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipp/harness.hpp"
#include "ipp/predictor.hpp"
#include "ipp/text.hpp"

namespace fs = std::filesystem;
using namespace ipp;

namespace {

struct Common {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out = "ipp_out";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "scenario YAML")->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "episode seed (first seed for sweeps)");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--set", c.overrides, "override, section.key=value")->take_all();
}

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg = c.config_path.empty() ? ScenarioConfig{} : load_config(c.config_path);
  for (const auto& o : c.overrides) apply_override(cfg, o);
  return cfg;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_summary(const Summary& s) {
  std::printf("%-40s n=%-3d H=%.4f+-%.4f mse=%.4f+-%.4f nbar=%.3f+-%.3f\n", s.label.c_str(), s.n,
              s.H.mean, s.H.std, s.mse.mean, s.mse.std, s.nbar.mean, s.nbar.std);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"informative path planning simulator for drifting targets"};
  app.require_subcommand(1);

  // run
  Common run_opts;
  std::string planner;
  std::string weight;
  bool no_prediction = false;
  double snapshot_every = -1.0;
  auto* run = app.add_subcommand("run", "single episode");
  add_common(run, run_opts);
  run->add_option("--planner", planner, "tree_search|receding_horizon|greedy|lawnmower|random");
  run->add_option("--w", weight, "weight schedule, e.g. 5, constant:2, decay(5)");
  run->add_flag("--no-prediction-step", no_prediction, "disable the map prediction step");
  run->add_option("--snapshot-every", snapshot_every, "grid snapshot period in seconds");

  // sweep
  Common sweep_opts;
  int trials = 20;
  int workers = 1;
  std::string planners;
  std::string weights;
  bool ablate = false;
  bool sweep_no_prediction = false;
  double sweep_snapshot_every = -1.0;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo trials over a grid of settings");
  add_common(sweep, sweep_opts);
  sweep->add_option("--trials", trials, "trials per setting")->check(CLI::PositiveNumber);
  sweep->add_option("--workers", workers, "parallel trials")->check(CLI::PositiveNumber);
  sweep->add_option("--planner", planners, "comma separated planner kinds");
  sweep->add_option("--w", weights, "comma separated weight schedules");
  sweep->add_flag("--ablate-prediction", ablate, "run with and without the prediction step");
  sweep->add_flag("--no-prediction-step", sweep_no_prediction, "disable the map prediction step");
  sweep->add_option("--snapshot-every", sweep_snapshot_every, "grid snapshot period in seconds");

  // dataset
  Common data_opts;
  int samples = 100;
  auto* dataset = app.add_subcommand("dataset", "export predictor training pairs");
  add_common(dataset, data_opts);
  dataset->add_option("--samples", samples, "number of samples")->check(CLI::PositiveNumber);

  // replay
  std::string trace_path;
  auto* replay = app.add_subcommand("replay", "validate a stored trace and print its metrics");
  replay->add_option("trace", trace_path, "trace file (.jsonl)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ScenarioConfig cfg = load(run_opts);
      if (!planner.empty()) cfg.planner.kind = parse_planner_kind(planner);
      if (!weight.empty()) cfg.planner.weight = parse_weight_schedule(weight);
      if (no_prediction) cfg.mapping.prediction_step = false;
      if (snapshot_every >= 0.0) cfg.output.snapshot_every = snapshot_every;
      require_valid(cfg);

      MonteCarloResult r;
      r.seeds = {run_opts.seed};
      r.trial_configs = {cfg};
      r.traces = {run_episode(cfg, run_opts.seed)};
      r.summary = aggregate({r.traces.front().metrics()}, to_string(cfg.planner.kind));
      write_bundle(run_opts.out, cfg, r);
      print_summary(r.summary);
      std::printf("steps=%zu replans=%zu checksum=%s\n", r.traces.front().steps.size(),
                  r.traces.front().decisions.size(), hex64(checksum(r.traces.front())).c_str());
      return 0;
    }

    if (*sweep) {
      ScenarioConfig base = load(sweep_opts);
      if (sweep_no_prediction) base.mapping.prediction_step = false;
      if (sweep_snapshot_every >= 0.0) base.output.snapshot_every = sweep_snapshot_every;

      std::vector<PlannerKind> kinds;
      for (const auto& k : split(planners, ',')) kinds.push_back(parse_planner_kind(k));
      if (kinds.empty()) kinds.push_back(base.planner.kind);
      std::vector<WeightSchedule> ws;
      for (const auto& w : split(weights, ',')) ws.push_back(parse_weight_schedule(w));
      if (ws.empty()) ws.push_back(base.planner.weight);
      std::vector<bool> pred{base.mapping.prediction_step};
      if (ablate) pred = {true, false};

      fs::create_directories(sweep_opts.out);
      std::ofstream table(fs::path(sweep_opts.out) / "summary.csv");
      write_summary_header(table);
      for (PlannerKind k : kinds) {
        for (const auto& w : ws) {
          for (bool p : pred) {
            ScenarioConfig cfg = base;
            cfg.planner.kind = k;
            cfg.planner.weight = w;
            cfg.mapping.prediction_step = p;
            require_valid(cfg);
            const std::string label =
                to_string(k) + "_w=" + to_string(w) + (p ? "" : "_noprediction");
            const auto result = run_monte_carlo(cfg, trials, sweep_opts.seed, workers, label);
            write_bundle(fs::path(sweep_opts.out) / label, cfg, result);
            write_summary_row(table, result.summary);
            print_summary(result.summary);
          }
        }
      }
      return 0;
    }

    if (*dataset) {
      const ScenarioConfig cfg = load(data_opts);
      require_valid(cfg);
      write_dataset(data_opts.out, generate_dataset(cfg, samples, data_opts.seed), data_opts.seed);
      std::printf("wrote %d samples to %s\n", samples, data_opts.out.c_str());
      return 0;
    }

    if (*replay) {
      const EpisodeTrace trace = read_trace(trace_path);
      if (trace.steps.empty()) throw TraceError("trace has no steps");
      const auto& last = trace.steps.back().metrics;
      std::printf("planner=%s seed=%llu config=%s steps=%zu decisions=%zu snapshots=%zu\n",
                  trace.planner.c_str(), static_cast<unsigned long long>(trace.seed),
                  hex64(trace.config_hash).c_str(), trace.steps.size(), trace.decisions.size(),
                  trace.snapshots.size());
      std::printf("final t=%s H=%s mse=%s nbar=%s checksum=%s\n", format_double(last.t).c_str(),
                  format_double(last.H).c_str(), format_double(last.mse).c_str(),
                  format_double(last.mean_detections).c_str(), hex64(checksum(trace)).c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ipp_sim: %s\n", e.what());
    return 1;
  }
  return 0;
}
