#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ipp/occupancy_grid.hpp"

namespace ipp {

GridGeometry geometry_of(const ScenarioConfig& config);

struct BinaryTargetGrid {
  GridGeometry geometry;
  std::vector<std::uint8_t> cells;  // exactly 0 or 1

  explicit BinaryTargetGrid(GridGeometry g)
      : geometry(g), cells(static_cast<std::size_t>(g.rows) * g.cols, 0) {}

  std::uint8_t at(int row, int col) const { return cells[geometry.index(row, col)]; }
  void set(int row, int col, bool v) { cells[geometry.index(row, col)] = v ? 1 : 0; }
};

struct PredictedGrid {
  GridGeometry geometry;
  std::vector<double> values;  // in [0, 1]
  double horizon = 0.0;
  WindState wind;

  double at(int row, int col) const { return values[geometry.index(row, col)]; }
};

/// 1 where p > 0.5, else 0.
BinaryTargetGrid binarize(const OccupancyGrid& grid);

/// Centroids (in map coordinates) of the 8-connected components of `k`.
std::vector<Vec2> component_centroids(const BinaryTargetGrid& k);

/// Kernel of one target after `t` seconds: center shift along the wind and
/// standard deviations along / across the wind direction.
struct KernelShape {
  Vec2 shift = Vec2::Zero();
  double sigma_parallel = 0.0;
  double sigma_perp = 0.0;
  double axis = 0.0;  // direction of the major axis
};

KernelShape kernel_shape(const WindState& wind, double t, double gamma, double calm_threshold);

/// Unit-peak anisotropic Gaussian at `center`; the cell containing the
/// center is set to 1. Combines into `out` by max or by clamped sum.
void render_kernel(PredictedGrid& out, const Vec2& center, const KernelShape& shape,
                   KernelCombine combine);

/// Future target-occupancy heatmap `t` seconds ahead. Throws
/// std::invalid_argument for t < 0.
PredictedGrid predict(const BinaryTargetGrid& k, const WindState& wind, double t, double gamma,
                      const PredictorConfig& config);

struct DatasetSample {
  BinaryTargetGrid input;
  WindState wind;
  double t = 0.0;
  int n_targets = 0;
  PredictedGrid output;
};

/// Random binary grids with 1..19 single-cell targets, random wind and
/// horizon, labelled by predict().
std::vector<DatasetSample> generate_dataset(const ScenarioConfig& config, int n_samples,
                                            std::uint64_t seed);

/// Directory per sample (input.csv, params.txt, output.csv) plus manifest.txt.
void write_dataset(const std::filesystem::path& dir, const std::vector<DatasetSample>& samples,
                   std::uint64_t seed);

}  // namespace ipp
