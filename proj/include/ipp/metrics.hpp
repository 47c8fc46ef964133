#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ipp/occupancy_grid.hpp"

namespace ipp {

/// Binary map of the cells holding a true target.
struct GroundTruthGrid {
  GridGeometry geometry;
  std::vector<std::uint8_t> cells;

  explicit GroundTruthGrid(GridGeometry g)
      : geometry(g), cells(static_cast<std::size_t>(g.rows) * g.cols, 0) {}

  std::uint8_t at(int row, int col) const { return cells[geometry.index(row, col)]; }
  void set(int row, int col, bool v) { cells[geometry.index(row, col)] = v ? 1 : 0; }
  int count() const;
};

/// Marks the cell of every target lying inside the grid.
GroundTruthGrid ground_truth(const GridGeometry& geometry, const std::vector<TargetState>& targets);

/// G * Y with G a unit-peak Gaussian of std `sigma_g` cells, truncated to
/// offsets with di^2 + dj^2 <= (4 sigma_g)^2; zero outside the grid.
std::vector<double> smoothed_truth(const GroundTruthGrid& truth, double sigma_g);

/// Mean over cells of (M - G * Y)^2. std::invalid_argument on geometry mismatch.
double mse(const OccupancyGrid& grid, const GroundTruthGrid& truth, double sigma_g);

/// Cumulative detections divided by the number of steps.
/// std::invalid_argument for an empty history.
double mean_detections(const std::vector<int>& history);

struct MetricSample {
  double t = 0.0;
  double H = 0.0;
  double mse = 0.0;
  int n_step = 0;
  double mean_detections = 0.0;

  bool operator==(const MetricSample&) const = default;
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample std (n - 1); 0 for a single value
};

Stat mean_std(const std::vector<double>& values);

struct CurvePoint {
  double t = 0.0;
  Stat H;
  Stat mse;
  Stat nbar;
};

struct Summary {
  std::string label;
  int n = 0;
  Stat H;     // final time
  Stat mse;   // final time
  Stat nbar;  // final time
  std::vector<CurvePoint> curve;
};

/// Final-time mean and std per metric, plus per-step curves over the common
/// prefix of all series. Needs at least one non-empty series.
Summary aggregate(const std::vector<std::vector<MetricSample>>& series, std::string label = "");

void write_metrics_header(std::ostream& os);
void write_metrics_rows(std::ostream& os, std::uint64_t seed, const std::vector<MetricSample>& samples);

void write_summary_header(std::ostream& os);
void write_summary_row(std::ostream& os, const Summary& s);

void write_curve_csv(std::ostream& os, const Summary& s);

}  // namespace ipp
