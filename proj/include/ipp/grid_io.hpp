#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ipp/occupancy_grid.hpp"

namespace ipp {

/// Row-major probability raster; row 0 is the southernmost row (lowest y).
struct ProbabilityRaster {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  bool operator==(const ProbabilityRaster&) const = default;
};

ProbabilityRaster raster_of(const OccupancyGrid& grid);

/// CSV, one line per grid row (row 0 first), shortest round-trip decimals.
std::string to_csv(const ProbabilityRaster& raster);
ProbabilityRaster parse_csv(const std::string& text);

/// Plain PGM (P2), probabilities scaled to 0..255, north row first.
std::string to_pgm(const ProbabilityRaster& raster);

/// One-line sidecar for a snapshot: origin, cell size and timestamp.
std::string snapshot_metadata(const GridGeometry& geometry, double t);

/// Writes <stem>.pgm, <stem>.meta and <stem>.csv.
void write_snapshot(const std::filesystem::path& stem, const OccupancyGrid& grid, double t);
void write_snapshot(const std::filesystem::path& stem, const ProbabilityRaster& raster,
                    const GridGeometry& geometry, double t);

}  // namespace ipp
