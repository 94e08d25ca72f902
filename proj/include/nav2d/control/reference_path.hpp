#pragma once

#include <functional>
#include <vector>

#include "nav2d/geometry/types.hpp"

namespace nav2d::ctl {

/// Natural (arc-length) parametrization theta in [0, theta_g] -> gamma(theta)
/// of a regular curve, built by resampling a raw curve through a cumulative
/// chord-length table.
class ReferencePath {
 public:
  ReferencePath() = default;

  /// Reparametrize curve(t), t in [t0, t1], by arc length.
  static ReferencePath from_curve(const std::function<geom::Point2(double)>& curve, double t0,
                                  double t1, int resolution = 4096);
  /// Polyline through the waypoints.
  static ReferencePath from_waypoints(const std::vector<geom::Point2>& waypoints);

  double theta_g() const { return theta_g_; }
  bool empty() const { return points_.empty(); }

  /// gamma(theta), clamped to [0, theta_g].
  geom::Point2 eval(double theta) const;

  /// Uniformly spaced samples for serialization / plotting.
  const std::vector<geom::Point2>& points() const { return points_; }
  double spacing() const { return spacing_; }

 private:
  std::vector<geom::Point2> points_;  // uniform arc-length grid
  double spacing_ = 0.0;
  double theta_g_ = 0.0;
};

}  // namespace nav2d::ctl
