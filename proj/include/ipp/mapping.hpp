#pragma once

#include <stdexcept>
#include <vector>

#include "ipp/occupancy_grid.hpp"
#include "ipp/perception.hpp"

namespace ipp {

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Detection inverse sensor model: sigmoid confidence in range times a
/// Gaussian kernel of std localization_sigma(r) over cell distance.
double positive_sensor_model(double r, double cell_dist, const SensorModelParams& params);

/// Free-space inverse sensor model at range r.
double negative_sensor_model(double r, const SensorModelParams& params);

/// Cells whose centers lie inside the fov of `pose`, in row-major order.
std::vector<CellIndex> fov_cells(const GridGeometry& grid, const Pose& pose,
                                 const SensorModelParams& params);

/// Estimation step. Detection kernels are applied in order (clamping after
/// each), then every fov cell not touched by a kernel gets the free-space update.
/// Throws ContractError for a detection outside the fov of `pose`.
void update_estimation(OccupancyGrid& grid, const std::vector<Detection>& detections,
                       const Pose& pose, const SensorModelParams& params);

/// Estimation step with the most likely measurement: fov cells with p > 0.5
/// are re-detected at their own range, all other fov cells observed free.
void update_expected_measurement(OccupancyGrid& grid, const Pose& pose,
                                 const SensorModelParams& params);

struct PredictionParams {
  double gamma = 0.03;
  double alpha = 0.9;
  double beta = 0.1;
};

/// Prediction step: shifts the occupied part of the map by the accumulated
/// integer drift and blends it into the current map.
void update_prediction(OccupancyGrid& grid, const WindState& wind, double dt,
                       const PredictionParams& params);

PredictionParams prediction_params(const ScenarioConfig& config);

/// Binary entropy in bits.
double binary_entropy(double p);

/// Mean per-cell binary entropy in bits.
double mean_entropy(const OccupancyGrid& grid);

}  // namespace ipp
