#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipp/grid_io.hpp"
#include "ipp/metrics.hpp"
#include "ipp/perception.hpp"
#include "ipp/planner.hpp"

namespace ipp {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kTraceVersion = 1;

struct StepRecord {
  double t = 0.0;  // mission clock at the end of the step
  Pose asv;        // pose at which the step's detections were taken
  WindState wind;
  std::vector<TargetState> targets;
  std::vector<Detection> detections;
  MetricSample metrics;
  bool replanned = false;

  bool operator==(const StepRecord&) const = default;
};

struct GridSnapshot {
  double t = 0.0;
  ProbabilityRaster raster;

  bool operator==(const GridSnapshot&) const = default;
};

struct EpisodeTrace {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string planner;
  int rows = 0;
  int cols = 0;
  std::vector<StepRecord> steps;
  std::vector<GridSnapshot> snapshots;
  std::vector<PlannerDecision> decisions;

  std::vector<MetricSample> metrics() const;
  bool operator==(const EpisodeTrace&) const = default;
};

/// JSON Lines: a header record, then step / snapshot / decision records,
/// then an end record with the counts. Wall-clock timings are not stored.
std::string serialize_trace(const EpisodeTrace& trace);

/// Throws TraceError naming the offending line or record.
EpisodeTrace parse_trace(const std::string& text);

void write_trace(const std::filesystem::path& path, const EpisodeTrace& trace);
EpisodeTrace read_trace(const std::filesystem::path& path);

/// FNV-1a of the serialized trace.
std::uint64_t checksum(const EpisodeTrace& trace);

/// Planner decision log, one row per evaluated candidate.
void write_decisions_csv(std::ostream& os, const std::vector<PlannerDecision>& decisions);

std::string hex64(std::uint64_t v);

}  // namespace ipp
