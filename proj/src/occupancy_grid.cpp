#include "ipp/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ipp {

double logit(double p) { return std::log(p / (1.0 - p)); }

double logistic(double l) { return 1.0 / (1.0 + std::exp(-l)); }

OccupancyGrid::OccupancyGrid(int rows, int cols, double cell_dx, double cell_dy, Vec2 origin,
                             double p_low, double p_high)
    : rows_(rows),
      cols_(cols),
      dx_(cell_dx),
      dy_(cell_dy),
      origin_(std::move(origin)),
      p_low_(p_low),
      p_high_(p_high),
      l_low_(logit(p_low)),
      l_high_(logit(p_high)),
      log_odds_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("grid must be non-empty");
  if (!(cell_dx > 0.0) || !(cell_dy > 0.0)) throw std::invalid_argument("cell size must be > 0");
  if (!(p_low > 0.0 && p_low < 0.5 && p_high > 0.5 && p_high < 1.0)) {
    throw std::invalid_argument("need 0 < p_low < 0.5 < p_high < 1");
  }
}

OccupancyGrid OccupancyGrid::from_config(const ScenarioConfig& config) {
  return OccupancyGrid(config.rows(), config.cols(), config.map.cell_dx, config.map.cell_dy,
                       Vec2::Zero(), config.mapping.p_low, config.mapping.p_high);
}

std::optional<CellIndex> OccupancyGrid::cell_of(const Vec2& p) const {
  const Vec2 rel = p - origin_;
  const int col = static_cast<int>(std::floor(rel.x() / dx_));
  const int row = static_cast<int>(std::floor(rel.y() / dy_));
  if (!contains(row, col)) return std::nullopt;
  return CellIndex{row, col};
}

CellIndex OccupancyGrid::nearest_cell(const Vec2& p) const {
  const Vec2 rel = p - origin_;
  return {static_cast<int>(std::floor(rel.y() / dy_)), static_cast<int>(std::floor(rel.x() / dx_))};
}

double OccupancyGrid::prob_at(std::size_t i) const {
  return std::clamp(logistic(log_odds_[i]), p_low_, p_high_);
}

double OccupancyGrid::clamp_log_odds(double l) const { return std::clamp(l, l_low_, l_high_); }

void OccupancyGrid::add_log_odds(int row, int col, double dl) {
  auto& l = log_odds_[index(row, col)];
  l = clamp_log_odds(l + dl);
}

void OccupancyGrid::set_prob(int row, int col, double p) {
  log_odds_[index(row, col)] = clamp_log_odds(logit(p));
}

std::vector<double> OccupancyGrid::probabilities() const {
  std::vector<double> out(log_odds_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = prob_at(i);
  return out;
}

bool OccupancyGrid::same_geometry(const OccupancyGrid& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && dx_ == o.dx_ && dy_ == o.dy_ &&
         origin_ == o.origin_;
}

bool OccupancyGrid::operator==(const OccupancyGrid& o) const {
  return same_geometry(o) && p_low_ == o.p_low_ && p_high_ == o.p_high_ &&
         residual == o.residual && log_odds_ == o.log_odds_;
}

}  // namespace ipp
