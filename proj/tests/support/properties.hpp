// Randomized property checks shared by the unit tests and the acceptance binary.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ipp/environment.hpp"
#include "ipp/mapping.hpp"
#include "ipp/predictor.hpp"

namespace ipp::testing {

struct PropertyResult {
  bool ok = true;
  long checks = 0;
  std::string failure;

  void fail(const std::string& why) {
    if (ok) failure = why;
    ok = false;
  }
};

inline std::vector<std::pair<int, int>> property_grid_sizes() {
  return {{1, 1}, {1, 50}, {50, 1}, {3, 7}, {10, 10}, {17, 33}, {25, 40}, {50, 50}};
}

inline Pose random_pose(const OccupancyGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, g.cols() * g.cell_dx());
  std::uniform_real_distribution<double> uy(0.0, g.rows() * g.cell_dy());
  std::uniform_real_distribution<double> ua(-std::numbers::pi, std::numbers::pi);
  return {ux(rng), uy(rng), wrap_angle(ua(rng))};
}

/// Up to `max_n` detections at random points inside the fov of `pose`.
inline std::vector<Detection> random_detections(const Pose& pose, const SensorModelParams& s,
                                                int max_n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, max_n);
  std::uniform_real_distribution<double> ur(0.0, s.max_range);
  std::uniform_real_distribution<double> ub(-0.5 * s.horizontal_fov, 0.5 * s.horizontal_fov);
  std::vector<Detection> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const double r = ur(rng);
    const double b = pose.psi + ub(rng);
    const Vec2 p = pose.position() + r * Vec2(std::cos(b), std::sin(b));
    if (!in_fov(pose, p, s)) continue;
    out.push_back({p, -1, (p - pose.position()).norm()});
  }
  return out;
}

inline WindState random_wind(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> us(0.0, 30.0);
  std::uniform_real_distribution<double> ua(-std::numbers::pi, std::numbers::pi);
  return {us(rng), wrap_angle(ua(rng))};
}

/// Every cell stays in [p_low, p_high] and |R| <= 0.5 after every estimation
/// and prediction step of random sequences.
inline PropertyResult check_clamp_and_residual(int sequences, int steps, std::uint64_t seed) {
  PropertyResult res;
  const SensorModelParams s;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> udt(0.1, 5.0);
  PredictionParams pp;
  for (const auto& [rows, cols] : property_grid_sizes()) {
    for (int q = 0; q < sequences; ++q) {
      OccupancyGrid g(rows, cols, 1.0, 1.0, Vec2::Zero(), 0.15, 0.9);
      for (int k = 0; k < steps; ++k) {
        const Pose pose = random_pose(g, rng);
        update_estimation(g, random_detections(pose, s, 6, rng), pose, s);
        update_prediction(g, random_wind(rng), udt(rng), pp);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double p = g.prob_at(i);
          const double l = g.log_odds_data()[i];
          ++res.checks;
          if (p < 0.15 || p > 0.9 || l < logit(0.15) || l > logit(0.9)) {
            res.fail("cell outside [p_low, p_high] on " + std::to_string(rows) + "x" +
                     std::to_string(cols));
          }
        }
        ++res.checks;
        if (!(g.residual.x() > -0.5 && g.residual.x() <= 0.5 && g.residual.y() > -0.5 &&
              g.residual.y() <= 0.5)) {
          res.fail("residual outside (-0.5, 0.5]");
        }
      }
    }
  }
  return res;
}

/// With zero wind the dynamic mapper equals a plain static occupancy grid, bit for bit.
inline PropertyResult check_zero_wind_equivalence(int sequences, int steps, std::uint64_t seed) {
  PropertyResult res;
  const SensorModelParams s;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> udt(0.1, 5.0);
  const auto sizes = property_grid_sizes();
  for (int q = 0; q < sequences; ++q) {
    const auto [rows, cols] = sizes[static_cast<std::size_t>(q) % sizes.size()];
    OccupancyGrid dynamic(rows, cols, 1.0, 1.0, Vec2::Zero(), 0.15, 0.9);
    OccupancyGrid fixed = dynamic;
    PredictionParams pp;
    pp.alpha = 0.7;
    pp.beta = 0.3;
    for (int k = 0; k < steps; ++k) {
      const Pose pose = random_pose(dynamic, rng);
      const auto dets = random_detections(pose, s, 6, rng);
      update_estimation(dynamic, dets, pose, s);
      update_prediction(dynamic, {0.0, ua(rng)}, udt(rng), pp);
      update_estimation(fixed, dets, pose, s);
    }
    ++res.checks;
    if (!(dynamic == fixed)) res.fail("zero-wind grid differs from the static grid");
  }
  return res;
}

/// With alpha = 1, beta = 0 an interior blob of occupied cells translates
/// rigidly by the accumulated integer shift.
inline PropertyResult check_rigid_translation(int trials, std::uint64_t seed) {
  PropertyResult res;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cell(18, 31);
  std::uniform_int_distribution<int> blob_size(1, 9);
  std::uniform_real_distribution<double> up(0.51, 0.9);
  std::uniform_real_distribution<double> ua(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> udt(0.2, 2.0);
  std::uniform_int_distribution<int> off(-2, 2);
  const PredictionParams pp{0.03, 1.0, 0.0};

  for (int q = 0; q < trials; ++q) {
    OccupancyGrid g(50, 50, 1.0, 1.0, Vec2::Zero(), 0.15, 0.9);
    for (int r = 0; r < 50; ++r) {
      for (int c = 0; c < 50; ++c) g.set_prob(r, c, 0.15);
    }
    const int r0 = cell(rng), c0 = cell(rng);
    const int n = blob_size(rng);
    for (int i = 0; i < n; ++i) g.set_prob(r0 + off(rng), c0 + off(rng), up(rng));
    const OccupancyGrid start = g;
    int above = 0;
    for (std::size_t i = 0; i < g.size(); ++i) above += g.prob_at(i) > 0.5;

    const WindState w{10.0 + 5.0 * (q % 3), ua(rng)};
    Vec2 total = Vec2::Zero();
    for (int k = 0; k < 12; ++k) {
      const double dt = udt(rng);
      update_prediction(g, w, dt, pp);
      const Vec2 d = drift(w, pp.gamma, dt);
      total += d;
    }
    const Vec2 shift_f = total - g.residual;
    const int sx = static_cast<int>(std::lround(shift_f.x()));
    const int sy = static_cast<int>(std::lround(shift_f.y()));

    int above_after = 0;
    for (int r = 0; r < 50; ++r) {
      for (int c = 0; c < 50; ++c) {
        const double got = g.prob(r, c);
        above_after += got > 0.5;
        const int sr = r - sy, sc = c - sx;
        const double want = start.contains(sr, sc) ? start.prob(sr, sc) : 0.15;
        const double want_filtered = want > 0.5 ? want : 0.15;
        ++res.checks;
        if (std::abs(got - want_filtered) > 1e-12) {
          res.fail("cell (" + std::to_string(r) + "," + std::to_string(c) +
                   ") did not translate rigidly");
        }
      }
    }
    ++res.checks;
    if (above_after != above) res.fail("occupied cell count changed");
  }
  return res;
}

}  // namespace ipp::testing
