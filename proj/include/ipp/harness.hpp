#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipp/metrics.hpp"
#include "ipp/trace.hpp"

namespace ipp {

class TrialError : public std::runtime_error {
 public:
  TrialError(std::uint64_t seed, const std::string& what)
      : std::runtime_error("trial seed " + std::to_string(seed) + ": " + what), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

std::uint64_t config_hash(const ScenarioConfig& config);

/// One mission: sense, estimate, predict, plan, act at dt until the clock
/// reaches the budget. Module errors are rethrown with the step index.
EpisodeTrace run_episode(const ScenarioConfig& config, std::uint64_t seed);

struct MonteCarloResult {
  Summary summary;
  std::vector<std::uint64_t> seeds;
  std::vector<ScenarioConfig> trial_configs;
  std::vector<EpisodeTrace> traces;
};

/// Trials seed0 .. seed0 + n - 1, each on sample_trial_config(base, seed).
/// Runs on up to `workers` threads; results are ordered by seed.
/// Throws TrialError for the lowest failing seed.
MonteCarloResult run_monte_carlo(const ScenarioConfig& base, int n_trials, std::uint64_t seed0,
                                 int workers = 1, const std::string& label = "");

/// Writes config.yaml, summary.csv, curve.csv, metrics.csv and, per trial,
/// trials/seed_<s>.csv, decisions/seed_<s>.csv, traces/seed_<s>.jsonl and
/// any grid snapshots.
void write_bundle(const std::filesystem::path& dir, const ScenarioConfig& base,
                  const MonteCarloResult& result);

}  // namespace ipp
