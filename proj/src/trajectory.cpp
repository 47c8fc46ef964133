#include "ipp/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace ipp {

namespace {

double bernstein4(int i, double u) {
  static constexpr double binom[5] = {1, 4, 6, 4, 1};
  return binom[i] * std::pow(u, i) * std::pow(1.0 - u, 4 - i);
}

}  // namespace

std::vector<Vec2> fit_quartic_bezier(const Vec2& start, std::span<const Vec2> waypoints,
                                     int samples) {
  std::vector<Vec2> q;
  q.reserve(waypoints.size() + 1);
  q.push_back(start);
  q.insert(q.end(), waypoints.begin(), waypoints.end());

  std::vector<double> chord(q.size(), 0.0);
  for (std::size_t k = 1; k < q.size(); ++k) chord[k] = chord[k - 1] + (q[k] - q[k - 1]).norm();
  const double total = chord.back();
  if (total <= 0.0) return {start};

  const Vec2 p0 = q.front();
  const Vec2 p4 = q.back();

  // Interior control points P1..P3 minimize the squared distance of the curve
  // to the interior data points, with a tiny pull towards the straight-line
  // placement so that short inputs stay well posed.
  constexpr double kRidge = 1e-9;
  Eigen::Matrix3d A = kRidge * Eigen::Matrix3d::Identity();
  Eigen::Matrix<double, 3, 2> rhs;
  for (int i = 0; i < 3; ++i) {
    rhs.row(i) = kRidge * (p0 + (i + 1) / 4.0 * (p4 - p0)).transpose();
  }
  for (std::size_t k = 1; k + 1 < q.size(); ++k) {
    const double u = chord[k] / total;
    Eigen::Vector3d b(bernstein4(1, u), bernstein4(2, u), bernstein4(3, u));
    const Vec2 residual = q[k] - bernstein4(0, u) * p0 - bernstein4(4, u) * p4;
    A += b * b.transpose();
    rhs += b * residual.transpose();
  }
  const Eigen::Matrix<double, 3, 2> inner = A.ldlt().solve(rhs);

  const Vec2 ctrl[5] = {p0, inner.row(0).transpose(), inner.row(1).transpose(),
                        inner.row(2).transpose(), p4};
  std::vector<Vec2> pts;
  pts.reserve(samples + 1);
  for (int s = 0; s <= samples; ++s) {
    const double u = static_cast<double>(s) / samples;
    Vec2 p = Vec2::Zero();
    for (int i = 0; i < 5; ++i) p += bernstein4(i, u) * ctrl[i];
    pts.push_back(p);
  }
  pts.front() = p0;
  pts.back() = p4;
  return pts;
}

Trajectory Trajectory::from_polyline(std::vector<Vec2> points, double speed,
                                     double start_heading, std::vector<Vec2> waypoints) {
  Trajectory t;
  t.speed_ = speed;
  t.start_heading_ = wrap_angle(start_heading);
  t.waypoints_ = std::move(waypoints);
  // Drop repeated points so every segment has a defined heading.
  for (const auto& p : points) {
    if (t.points_.empty() || (p - t.points_.back()).norm() > 1e-12) t.points_.push_back(p);
  }
  t.cumulative_.assign(t.points_.size(), 0.0);
  for (std::size_t i = 1; i < t.points_.size(); ++i) {
    t.cumulative_[i] = t.cumulative_[i - 1] + (t.points_[i] - t.points_[i - 1]).norm();
  }
  t.arc_length_ = t.cumulative_.empty() ? 0.0 : t.cumulative_.back();
  return t;
}

Trajectory Trajectory::bezier_through(const Vec2& start, std::span<const Vec2> waypoints,
                                      double speed, double start_heading) {
  return from_polyline(fit_quartic_bezier(start, waypoints), speed, start_heading,
                       std::vector<Vec2>(waypoints.begin(), waypoints.end()));
}

Pose Trajectory::pose_at_arc(double s) const {
  if (points_.empty()) return {};
  if (points_.size() == 1) return {points_[0].x(), points_[0].y(), start_heading_};
  s = std::clamp(s, 0.0, arc_length_);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t seg = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  seg = std::clamp<std::size_t>(seg, 1, points_.size() - 1);
  const Vec2& a = points_[seg - 1];
  const Vec2& b = points_[seg];
  const double len = cumulative_[seg] - cumulative_[seg - 1];
  const double f = len > 0.0 ? (s - cumulative_[seg - 1]) / len : 0.0;
  const Vec2 p = a + f * (b - a);
  const Vec2 d = b - a;
  return {p.x(), p.y(), wrap_angle(std::atan2(d.y(), d.x()))};
}

Pose Trajectory::pose_at(double t) const { return pose_at_arc(speed_ * std::max(0.0, t)); }

std::vector<TimedPose> Trajectory::sample(double dt) const {
  std::vector<TimedPose> out;
  if (points_.empty()) return out;
  const double dur = duration();
  const auto n = static_cast<long>(std::floor(dur / dt + 1e-9));
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    out.push_back({pose_at(t), t});
  }
  if (dur - static_cast<double>(n) * dt > 1e-9) out.push_back({pose_at(dur), dur});
  return out;
}

Trajectory Trajectory::truncated(double arc, std::size_t keep_waypoints) const {
  std::vector<Vec2> wps(waypoints_.begin(),
                        waypoints_.begin() + std::min(keep_waypoints, waypoints_.size()));
  if (arc >= arc_length_) return from_polyline(points_, speed_, start_heading_, std::move(wps));
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < points_.size() && cumulative_[i] < arc; ++i) {
    pts.push_back(points_[i]);
  }
  pts.push_back(pose_at_arc(std::max(0.0, arc)).position());
  return from_polyline(std::move(pts), speed_, start_heading_, std::move(wps));
}

Trajectory Trajectory::then(const Trajectory& next) const {
  std::vector<Vec2> pts = points_;
  pts.insert(pts.end(), next.points_.begin(), next.points_.end());
  std::vector<Vec2> wps = waypoints_;
  wps.insert(wps.end(), next.waypoints_.begin(), next.waypoints_.end());
  return from_polyline(std::move(pts), speed_, start_heading_, std::move(wps));
}

double Trajectory::max_curvature() const {
  double kmax = 0.0;
  for (std::size_t i = 1; i + 1 < points_.size(); ++i) {
    const Vec2 d0 = points_[i] - points_[i - 1];
    const Vec2 d1 = points_[i + 1] - points_[i];
    const double turn =
        std::abs(wrap_angle(std::atan2(d1.y(), d1.x()) - std::atan2(d0.y(), d0.x())));
    const double len = 0.5 * (d0.norm() + d1.norm());
    if (len > 0.0) kmax = std::max(kmax, turn / len);
  }
  return kmax;
}

}  // namespace ipp
