#include "ipp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ipp/text.hpp"

namespace ipp {

int GroundTruthGrid::count() const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

GroundTruthGrid ground_truth(const GridGeometry& geometry, const std::vector<TargetState>& targets) {
  GroundTruthGrid y(geometry);
  for (const auto& t : targets) {
    const Vec2 rel = t.position - geometry.origin;
    const double fc = rel.x() / geometry.cell_dx;
    const double fr = rel.y() / geometry.cell_dy;
    if (fc < 0.0 || fr < 0.0) continue;
    const int col = static_cast<int>(std::floor(fc));
    const int row = static_cast<int>(std::floor(fr));
    if (geometry.contains(row, col)) y.set(row, col, true);
  }
  return y;
}

std::vector<double> smoothed_truth(const GroundTruthGrid& truth, double sigma_g) {
  const auto& g = truth.geometry;
  std::vector<double> out(truth.cells.size(), 0.0);
  const double reach = 4.0 * std::max(sigma_g, 0.0);
  const int span = static_cast<int>(std::floor(reach));
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      if (!truth.at(r, c)) continue;
      for (int dr = -span; dr <= span; ++dr) {
        for (int dc = -span; dc <= span; ++dc) {
          const double d2 = static_cast<double>(dr * dr + dc * dc);
          if (d2 > reach * reach) continue;
          if (!g.contains(r + dr, c + dc)) continue;
          const double w = sigma_g > 0.0 ? std::exp(-d2 / (2.0 * sigma_g * sigma_g)) : 1.0;
          out[g.index(r + dr, c + dc)] += w;
        }
      }
    }
  }
  return out;
}

double mse(const OccupancyGrid& grid, const GroundTruthGrid& truth, double sigma_g) {
  if (grid.geometry() != truth.geometry) {
    throw std::invalid_argument("mse: grid and ground truth geometries differ");
  }
  const std::vector<double> target = smoothed_truth(truth, sigma_g);
  double sum = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double e = grid.prob_at(i) - target[i];
    sum += e * e;
  }
  return sum / static_cast<double>(target.size());
}

double mean_detections(const std::vector<int>& history) {
  if (history.empty()) throw std::invalid_argument("mean_detections: empty history");
  const long total = std::accumulate(history.begin(), history.end(), 0L);
  return static_cast<double>(total) / static_cast<double>(history.size());
}

Stat mean_std(const std::vector<double>& values) {
  Stat s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

Summary aggregate(const std::vector<std::vector<MetricSample>>& series, std::string label) {
  if (series.empty()) throw std::invalid_argument("aggregate: no traces");
  std::size_t len = series.front().size();
  for (const auto& s : series) len = std::min(len, s.size());
  if (len == 0) throw std::invalid_argument("aggregate: empty trace");

  auto column = [&](std::size_t k, auto field) {
    std::vector<double> v;
    v.reserve(series.size());
    for (const auto& s : series) v.push_back(field(s[k]));
    return mean_std(v);
  };
  const auto H = [](const MetricSample& m) { return m.H; };
  const auto E = [](const MetricSample& m) { return m.mse; };
  const auto N = [](const MetricSample& m) { return m.mean_detections; };

  Summary out;
  out.label = std::move(label);
  out.n = static_cast<int>(series.size());
  for (std::size_t k = 0; k < len; ++k) {
    out.curve.push_back({series.front()[k].t, column(k, H), column(k, E), column(k, N)});
  }
  // Final time of each series, which may be longer than the common prefix.
  std::vector<double> fh, fe, fn;
  for (const auto& s : series) {
    fh.push_back(s.back().H);
    fe.push_back(s.back().mse);
    fn.push_back(s.back().mean_detections);
  }
  out.H = mean_std(fh);
  out.mse = mean_std(fe);
  out.nbar = mean_std(fn);
  return out;
}

void write_metrics_header(std::ostream& os) { os << "seed,t,H,mse,n_step,mean_detections\n"; }

void write_metrics_rows(std::ostream& os, std::uint64_t seed,
                        const std::vector<MetricSample>& samples) {
  for (const auto& m : samples) {
    os << seed << ',' << format_double(m.t) << ',' << format_double(m.H) << ','
       << format_double(m.mse) << ',' << m.n_step << ',' << format_double(m.mean_detections)
       << '\n';
  }
}

void write_summary_header(std::ostream& os) {
  os << "label,n,H_mean,H_std,mse_mean,mse_std,nbar_mean,nbar_std\n";
}

void write_summary_row(std::ostream& os, const Summary& s) {
  os << s.label << ',' << s.n << ',' << format_double(s.H.mean) << ',' << format_double(s.H.std)
     << ',' << format_double(s.mse.mean) << ',' << format_double(s.mse.std) << ','
     << format_double(s.nbar.mean) << ',' << format_double(s.nbar.std) << '\n';
}

void write_curve_csv(std::ostream& os, const Summary& s) {
  os << "t,H_mean,H_std,mse_mean,mse_std,nbar_mean,nbar_std\n";
  for (const auto& p : s.curve) {
    os << format_double(p.t) << ',' << format_double(p.H.mean) << ',' << format_double(p.H.std)
       << ',' << format_double(p.mse.mean) << ',' << format_double(p.mse.std) << ','
       << format_double(p.nbar.mean) << ',' << format_double(p.nbar.std) << '\n';
  }
}

}  // namespace ipp
