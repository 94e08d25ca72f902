#include "nav2d/control/reference_path.hpp"

#include <cmath>

#include "nav2d/errors.hpp"

namespace nav2d::ctl {

using geom::Point2;

ReferencePath ReferencePath::from_curve(const std::function<Point2(double)>& curve, double t0,
                                        double t1, int resolution) {
  std::vector<Point2> raw;
  raw.reserve(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    raw.push_back(curve(t0 + (t1 - t0) * i / resolution));
  }
  return from_waypoints(raw);
}

ReferencePath ReferencePath::from_waypoints(const std::vector<Point2>& waypoints) {
  if (waypoints.size() < 2) throw InvalidGeometry("reference path needs at least 2 points");
  std::vector<double> cum(waypoints.size(), 0.0);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    cum[i] = cum[i - 1] + geom::distance(waypoints[i], waypoints[i - 1]);
  }
  const double total = cum.back();
  if (!(total > 0.0)) throw InvalidGeometry("reference path has zero length");

  const int n = std::max(64, static_cast<int>(std::ceil(total / 0.005)));
  ReferencePath path;
  path.points_.reserve(n + 1);
  std::size_t seg = 0;
  for (int k = 0; k <= n; ++k) {
    const double target = total * k / n;
    while (seg + 1 < cum.size() && cum[seg + 1] < target) ++seg;
    const double span = cum[seg + 1] - cum[seg];
    const double t = (span > 1e-15) ? (target - cum[seg]) / span : 0.0;
    path.points_.push_back(waypoints[seg] + (waypoints[seg + 1] - waypoints[seg]) * t);
  }
  path.spacing_ = total / n;
  path.theta_g_ = total;
  return path;
}

Point2 ReferencePath::eval(double theta) const {
  if (points_.empty()) throw InvalidGeometry("empty reference path");
  const double t = std::clamp(theta, 0.0, theta_g_);
  const double pos = t / spacing_;
  const std::size_t idx = std::min(static_cast<std::size_t>(pos), points_.size() - 2);
  const double frac = pos - idx;
  return points_[idx] + (points_[idx + 1] - points_[idx]) * frac;
}

}  // namespace nav2d::ctl
