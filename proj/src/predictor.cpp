#include "ipp/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "ipp/environment.hpp"
#include "ipp/rng.hpp"
#include "ipp/text.hpp"

namespace ipp {

GridGeometry geometry_of(const ScenarioConfig& config) {
  return {config.rows(), config.cols(), config.map.cell_dx, config.map.cell_dy, Vec2::Zero()};
}

BinaryTargetGrid binarize(const OccupancyGrid& grid) {
  BinaryTargetGrid k(grid.geometry());
  for (std::size_t i = 0; i < grid.size(); ++i) k.cells[i] = grid.prob_at(i) > 0.5 ? 1 : 0;
  return k;
}

std::vector<Vec2> component_centroids(const BinaryTargetGrid& k) {
  const auto& g = k.geometry;
  std::vector<char> seen(k.cells.size(), 0);
  std::vector<Vec2> centroids;
  std::vector<CellIndex> stack;
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      if (!k.at(r, c) || seen[g.index(r, c)]) continue;
      Vec2 sum = Vec2::Zero();
      int count = 0;
      stack.push_back({r, c});
      seen[g.index(r, c)] = 1;
      while (!stack.empty()) {
        const CellIndex cell = stack.back();
        stack.pop_back();
        sum += g.cell_center(cell.row, cell.col);
        ++count;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = cell.row + dr;
            const int nc = cell.col + dc;
            if (!g.contains(nr, nc) || !k.at(nr, nc) || seen[g.index(nr, nc)]) continue;
            seen[g.index(nr, nc)] = 1;
            stack.push_back({nr, nc});
          }
        }
      }
      centroids.push_back(sum / count);
    }
  }
  return centroids;
}

KernelShape kernel_shape(const WindState& wind, double t, double gamma, double calm_threshold) {
  KernelShape s;
  s.shift = drift(wind, gamma, t);
  s.axis = wind.dir;
  if (wind.speed < calm_threshold) {
    s.sigma_parallel = s.sigma_perp = 0.1 * t;
  } else {
    s.sigma_parallel = 0.5 * gamma * wind.speed * t;
    s.sigma_perp = 0.2 * gamma * wind.speed * t;
  }
  return s;
}

void render_kernel(PredictedGrid& out, const Vec2& center, const KernelShape& shape,
                   KernelCombine combine) {
  const auto& g = out.geometry;
  auto combine_into = [&](std::size_t i, double v) {
    if (combine == KernelCombine::Max) {
      out.values[i] = std::max(out.values[i], v);
    } else {
      out.values[i] = std::min(1.0, out.values[i] + v);
    }
  };

  const Vec2 rel = center - g.origin;
  const int center_col = static_cast<int>(std::floor(rel.x() / g.cell_dx));
  const int center_row = static_cast<int>(std::floor(rel.y() / g.cell_dy));

  if (shape.sigma_parallel > 0.0 && shape.sigma_perp > 0.0) {
    // Beyond 8 sigma the kernel is below 1e-13.
    const double reach = 8.0 * std::max(shape.sigma_parallel, shape.sigma_perp);
    const int c0 = std::max(0, static_cast<int>(std::floor((rel.x() - reach) / g.cell_dx)));
    const int c1 = std::min(g.cols - 1, static_cast<int>(std::floor((rel.x() + reach) / g.cell_dx)));
    const int r0 = std::max(0, static_cast<int>(std::floor((rel.y() - reach) / g.cell_dy)));
    const int r1 = std::min(g.rows - 1, static_cast<int>(std::floor((rel.y() + reach) / g.cell_dy)));
    const Vec2 along(std::cos(shape.axis), std::sin(shape.axis));
    const Vec2 across(-along.y(), along.x());
    const double inv_par = 1.0 / (shape.sigma_parallel * shape.sigma_parallel);
    const double inv_perp = 1.0 / (shape.sigma_perp * shape.sigma_perp);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        if (r == center_row && c == center_col) continue;
        const Vec2 d = g.cell_center(r, c) - center;
        const double u = d.dot(along);
        const double v = d.dot(across);
        combine_into(g.index(r, c), std::exp(-0.5 * (u * u * inv_par + v * v * inv_perp)));
      }
    }
  }
  if (g.contains(center_row, center_col)) combine_into(g.index(center_row, center_col), 1.0);
}

PredictedGrid predict(const BinaryTargetGrid& k, const WindState& wind, double t, double gamma,
                      const PredictorConfig& config) {
  if (t < 0.0) throw std::invalid_argument("prediction horizon must be >= 0");
  PredictedGrid out{k.geometry, std::vector<double>(k.cells.size(), 0.0), t, wind};
  const KernelShape shape = kernel_shape(wind, t, gamma, config.calm_threshold);
  for (const Vec2& c : component_centroids(k)) {
    render_kernel(out, c + shape.shift, shape, config.combine);
  }
  return out;
}

std::vector<DatasetSample> generate_dataset(const ScenarioConfig& config, int n_samples,
                                            std::uint64_t seed) {
  if (n_samples <= 0) throw std::invalid_argument("n_samples must be > 0");
  Engine rng = RngStreams(seed).stream("dataset");
  const GridGeometry g = geometry_of(config);
  std::uniform_int_distribution<int> count(1, 19);
  std::uniform_int_distribution<int> row(0, g.rows - 1);
  std::uniform_int_distribution<int> col(0, g.cols - 1);
  std::uniform_real_distribution<double> speed(0.0, 12.0);
  std::uniform_real_distribution<double> dir(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> horizon(0.0, 30.0);

  std::vector<DatasetSample> samples;
  samples.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    BinaryTargetGrid input(g);
    const int n = count(rng);
    int placed = 0;
    while (placed < n) {
      const int r = row(rng);
      const int c = col(rng);
      if (input.at(r, c)) continue;
      input.set(r, c, true);
      ++placed;
    }
    const double v = speed(rng);
    const double psi = dir(rng);
    const WindState wind{v, wrap_angle(psi)};
    const double t = horizon(rng);
    PredictedGrid output = predict(input, wind, t, config.wind.gamma, config.predictor);
    samples.push_back({std::move(input), wind, t, n, std::move(output)});
  }
  return samples;
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

void write_dataset(const std::filesystem::path& dir, const std::vector<DatasetSample>& samples,
                   std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  std::string manifest = "ipp-dataset v1\nseed " + std::to_string(seed) + "\nsamples " +
                         std::to_string(samples.size()) + "\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& sample = samples[s];
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%05zu", s);
    const auto sample_dir = dir / name;
    std::filesystem::create_directories(sample_dir);

    const auto& g = sample.input.geometry;
    std::string input;
    std::string output;
    for (int r = 0; r < g.rows; ++r) {
      for (int c = 0; c < g.cols; ++c) {
        if (c) {
          input += ',';
          output += ',';
        }
        input += sample.input.at(r, c) ? '1' : '0';
        output += format_double(sample.output.at(r, c));
      }
      input += '\n';
      output += '\n';
    }
    const double vx = sample.wind.speed * std::cos(sample.wind.dir);
    const double vy = sample.wind.speed * std::sin(sample.wind.dir);
    write_text(sample_dir / "input.csv", input);
    write_text(sample_dir / "output.csv", output);
    write_text(sample_dir / "params.txt",
               format_double(vx) + " " + format_double(vy) + " " + format_double(sample.t) + "\n");
    manifest += std::string(name) + " " + std::to_string(sample.n_targets) + " " +
                format_double(vx) + " " + format_double(vy) + " " + format_double(sample.t) + "\n";
  }
  write_text(dir / "manifest.txt", manifest);
}

}  // namespace ipp
