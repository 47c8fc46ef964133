#include "ipp/mapping.hpp"

#include <algorithm>
#include <cmath>

#include "ipp/environment.hpp"

namespace ipp {

double positive_sensor_model(double r, double cell_dist, const SensorModelParams& params) {
  const double confidence = 1.0 / (1.0 + std::exp(params.a * (r - params.d)));
  const double sigma = localization_sigma(r);
  if (sigma <= 0.0) return cell_dist == 0.0 ? confidence : 0.0;
  return confidence * std::exp(-cell_dist * cell_dist / (2.0 * sigma * sigma));
}

double negative_sensor_model(double r, const SensorModelParams& params) {
  return 1.0 / (1.0 + std::exp(params.a_prime * (r - params.d_prime)));
}

std::vector<CellIndex> fov_cells(const GridGeometry& grid, const Pose& pose,
                                 const SensorModelParams& params) {
  std::vector<CellIndex> out;
  const Vec2 rel = pose.position() - grid.origin;
  const double reach = params.max_range;
  const int c0 = std::max(0, static_cast<int>(std::floor((rel.x() - reach) / grid.cell_dx)));
  const int c1 =
      std::min(grid.cols - 1, static_cast<int>(std::floor((rel.x() + reach) / grid.cell_dx)));
  const int r0 = std::max(0, static_cast<int>(std::floor((rel.y() - reach) / grid.cell_dy)));
  const int r1 =
      std::min(grid.rows - 1, static_cast<int>(std::floor((rel.y() + reach) / grid.cell_dy)));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (in_fov(pose, grid.cell_center(r, c), params)) out.push_back({r, c});
    }
  }
  return out;
}

namespace {

void apply_free_space(OccupancyGrid& grid, const Pose& pose, const SensorModelParams& params,
                      const std::vector<CellIndex>& cells, const std::vector<char>& occupied) {
  for (const auto& cell : cells) {
    if (occupied[grid.index(cell.row, cell.col)]) continue;
    const double r =
        std::min((grid.cell_center(cell.row, cell.col) - pose.position()).norm(), params.max_range);
    grid.add_log_odds(cell.row, cell.col, logit(negative_sensor_model(r, params)));
  }
}

}  // namespace

void update_estimation(OccupancyGrid& grid, const std::vector<Detection>& detections,
                       const Pose& pose, const SensorModelParams& params) {
  for (const auto& det : detections) {
    if (!in_fov(pose, det.position, params)) {
      throw ContractError("detection outside the fov of the observing pose");
    }
  }

  std::vector<char> occupied(grid.size(), 0);
  for (const auto& det : detections) {
    const double r = det.range;
    const double confidence = positive_sensor_model(r, 0.0, params);
    if (confidence <= grid.p_low()) continue;

    // Kernel support: cells where the model exceeds p_low.
    const double sigma = localization_sigma(r);
    const double radius =
        sigma > 0.0 ? sigma * std::sqrt(2.0 * std::log(confidence / grid.p_low())) : 0.0;
    const CellIndex center = grid.nearest_cell(det.position);
    const Vec2 snapped = grid.cell_center(center.row, center.col);
    const int span_c = static_cast<int>(std::ceil(radius / grid.cell_dx()));
    const int span_r = static_cast<int>(std::ceil(radius / grid.cell_dy()));
    for (int row = center.row - span_r; row <= center.row + span_r; ++row) {
      for (int col = center.col - span_c; col <= center.col + span_c; ++col) {
        if (!grid.contains(row, col)) continue;
        const double dist = (grid.cell_center(row, col) - snapped).norm();
        const double p = positive_sensor_model(r, dist, params);
        if (p <= grid.p_low()) continue;
        grid.add_log_odds(row, col, logit(p));
        occupied[grid.index(row, col)] = 1;
      }
    }
  }

  apply_free_space(grid, pose, params, fov_cells(grid.geometry(), pose, params), occupied);
}

void update_expected_measurement(OccupancyGrid& grid, const Pose& pose,
                                 const SensorModelParams& params) {
  for (const auto& cell : fov_cells(grid.geometry(), pose, params)) {
    const double r =
        std::min((grid.cell_center(cell.row, cell.col) - pose.position()).norm(), params.max_range);
    const double p = grid.log_odds(cell.row, cell.col) > 0.0
                         ? positive_sensor_model(r, 0.0, params)
                         : negative_sensor_model(r, params);
    grid.add_log_odds(cell.row, cell.col, logit(p));
  }
}

PredictionParams prediction_params(const ScenarioConfig& config) {
  return {config.wind.gamma, config.mapping.alpha, config.mapping.beta};
}

void update_prediction(OccupancyGrid& grid, const WindState& wind, double dt,
                       const PredictionParams& params) {
  if (!(dt > 0.0)) throw ContractError("prediction step needs dt > 0");

  const Vec2 d = drift(wind, params.gamma, dt);
  grid.residual += Vec2(d.x() / grid.cell_dx(), d.y() / grid.cell_dy());
  // Rounds half toward -inf so the residual stays in (-0.5, 0.5].
  const int sx = static_cast<int>(std::ceil(grid.residual.x() - 0.5));
  const int sy = static_cast<int>(std::ceil(grid.residual.y() - 0.5));
  grid.residual -= Vec2(sx, sy);
  if (sx == 0 && sy == 0) return;

  // Filtered map: only occupied cells keep their value.
  const double p_low = grid.p_low();
  std::vector<double> current = grid.probabilities();
  std::vector<double> filtered(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    filtered[i] = current[i] > 0.5 ? current[i] : p_low;
  }

  for (int row = 0; row < grid.rows(); ++row) {
    for (int col = 0; col < grid.cols(); ++col) {
      const int src_row = row - sy;
      const int src_col = col - sx;
      const double source =
          grid.contains(src_row, src_col) ? filtered[grid.index(src_row, src_col)] : p_low;
      const std::size_t i = grid.index(row, col);
      if (filtered[i] == source) continue;
      grid.set_prob(row, col, params.alpha * source + params.beta * current[i]);
    }
  }
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double mean_entropy(const OccupancyGrid& grid) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += binary_entropy(grid.prob_at(i));
  return sum / static_cast<double>(grid.size());
}

}  // namespace ipp
