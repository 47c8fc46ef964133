#include "ipp/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ipp/text.hpp"

namespace ipp {

ProbabilityRaster raster_of(const OccupancyGrid& grid) {
  return {grid.rows(), grid.cols(), grid.probabilities()};
}

std::string to_csv(const ProbabilityRaster& raster) {
  std::string out;
  for (int r = 0; r < raster.rows; ++r) {
    for (int c = 0; c < raster.cols; ++c) {
      if (c) out += ',';
      out += format_double(raster.values[static_cast<std::size_t>(r) * raster.cols + c]);
    }
    out += '\n';
  }
  return out;
}

ProbabilityRaster parse_csv(const std::string& text) {
  ProbabilityRaster raster;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    int count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto field = std::string_view(line).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      try {
        raster.values.push_back(parse_double(field));
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": " + e.what());
      }
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (raster.rows == 0) {
      raster.cols = count;
    } else if (count != raster.cols) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(raster.cols) + " columns, got " +
                               std::to_string(count));
    }
    ++raster.rows;
  }
  return raster;
}

std::string to_pgm(const ProbabilityRaster& raster) {
  std::string out = "P2\n" + std::to_string(raster.cols) + " " + std::to_string(raster.rows) +
                    "\n255\n";
  for (int r = raster.rows - 1; r >= 0; --r) {
    for (int c = 0; c < raster.cols; ++c) {
      if (c) out += ' ';
      const double p = raster.values[static_cast<std::size_t>(r) * raster.cols + c];
      out += std::to_string(static_cast<int>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0)));
    }
    out += '\n';
  }
  return out;
}

std::string snapshot_metadata(const GridGeometry& g, double t) {
  return "origin=" + format_double(g.origin.x()) + "," + format_double(g.origin.y()) +
         " cell=" + format_double(g.cell_dx) + "," + format_double(g.cell_dy) +
         " t=" + format_double(t) + "\n";
}

void write_snapshot(const std::filesystem::path& stem, const OccupancyGrid& grid, double t) {
  write_snapshot(stem, raster_of(grid), grid.geometry(), t);
}

void write_snapshot(const std::filesystem::path& stem, const ProbabilityRaster& raster,
                    const GridGeometry& geometry, double t) {
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  };
  write(std::filesystem::path(stem).concat(".pgm"), to_pgm(raster));
  write(std::filesystem::path(stem).concat(".meta"), snapshot_metadata(geometry, t));
  write(std::filesystem::path(stem).concat(".csv"), to_csv(raster));
}

}  // namespace ipp
