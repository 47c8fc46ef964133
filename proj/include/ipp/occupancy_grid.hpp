#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ipp/geometry.hpp"
#include "ipp/scenario.hpp"

namespace ipp {

struct CellIndex {
  int row = 0;  // along y
  int col = 0;  // along x

  bool operator==(const CellIndex&) const = default;
};

struct GridGeometry {
  int rows = 0;
  int cols = 0;
  double cell_dx = 1.0;
  double cell_dy = 1.0;
  Vec2 origin = Vec2::Zero();

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * cols + col;
  }
  bool contains(int row, int col) const {
    return row >= 0 && row < rows && col >= 0 && col < cols;
  }
  Vec2 cell_center(int row, int col) const {
    return origin + Vec2((col + 0.5) * cell_dx, (row + 0.5) * cell_dy);
  }

  bool operator==(const GridGeometry&) const = default;
};

double logit(double p);
double logistic(double l);

/// Probabilistic occupancy map stored as log-odds, clamped to
/// [logit(p_low), logit(p_high)]. Row index runs along y, column along x;
/// cell (r, c) covers [origin + (c dx, r dy), origin + ((c+1) dx, (r+1) dy)).
class OccupancyGrid {
 public:
  OccupancyGrid(int rows, int cols, double cell_dx, double cell_dy, Vec2 origin, double p_low,
                double p_high);

  static OccupancyGrid from_config(const ScenarioConfig& config);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return log_odds_.size(); }
  double cell_dx() const { return dx_; }
  double cell_dy() const { return dy_; }
  const Vec2& origin() const { return origin_; }
  double p_low() const { return p_low_; }
  double p_high() const { return p_high_; }

  GridGeometry geometry() const { return {rows_, cols_, dx_, dy_, origin_}; }

  bool contains(int row, int col) const {
    return row >= 0 && row < rows_ && col >= 0 && col < cols_;
  }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * cols_ + col;
  }
  Vec2 cell_center(int row, int col) const {
    return origin_ + Vec2((col + 0.5) * dx_, (row + 0.5) * dy_);
  }
  /// Cell whose area contains `p`, if inside the grid.
  std::optional<CellIndex> cell_of(const Vec2& p) const;
  /// Nearest cell center to `p`, possibly outside the grid.
  CellIndex nearest_cell(const Vec2& p) const;

  double log_odds(int row, int col) const { return log_odds_[index(row, col)]; }
  double prob(int row, int col) const { return prob_at(index(row, col)); }
  double prob_at(std::size_t i) const;

  /// l += dl, then clamp.
  void add_log_odds(int row, int col, double dl);
  void set_prob(int row, int col, double p);

  std::span<const double> log_odds_data() const { return log_odds_; }
  std::vector<double> probabilities() const;

  /// Accumulated sub-cell drift (R_x, R_y), in cells.
  Vec2 residual = Vec2::Zero();

  bool same_geometry(const OccupancyGrid& other) const;
  bool operator==(const OccupancyGrid& other) const;

 private:
  double clamp_log_odds(double l) const;

  int rows_;
  int cols_;
  double dx_;
  double dy_;
  Vec2 origin_;
  double p_low_;
  double p_high_;
  double l_low_;
  double l_high_;
  std::vector<double> log_odds_;
};

}  // namespace ipp
