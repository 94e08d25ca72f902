#include "nav2d/sim/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace nav2d::sim {

using geom::Point2;
using geom::Polygon2;

ShapeSpec ShapeSpec::disk(const Point2& c, double r) {
  ShapeSpec s;
  s.kind = Kind::Disk;
  s.center = c;
  s.radius = r;
  s.polygon = geom::polygonize_disk(c, r, geom::ArcFit::Outer);
  return s;
}

ShapeSpec ShapeSpec::from_polygon(Polygon2 poly) {
  ShapeSpec s;
  s.kind = Kind::Polygon;
  s.center = poly.centroid();
  s.polygon = std::move(poly);
  return s;
}

Polygon2 ShapeSpec::polygon_at(const Point2& offset) const {
  std::vector<Point2> verts = polygon.vertices();
  for (Point2& v : verts) v += offset;
  return Polygon2::unchecked(std::move(verts));
}

mpc::PredictedShape ShapeSpec::predicted_at(const Point2& offset) const {
  if (kind == Kind::Disk) return mpc::PredictedShape::disk(center + offset, radius);
  return mpc::PredictedShape::from_polygon(polygon_at(offset));
}

Point2 MotionSpec::offset_at(double t) const {
  switch (kind) {
    case Kind::Static:
      return {0.0, 0.0};
    case Kind::Linear:
      return velocity * t;
    case Kind::Waypoints: {
      if (waypoints.empty()) return {0.0, 0.0};
      if (t <= waypoints.front().first) return waypoints.front().second;
      if (t >= waypoints.back().first) return waypoints.back().second;
      for (std::size_t i = 1; i < waypoints.size(); ++i) {
        if (t <= waypoints[i].first) {
          const auto& [t0, p0] = waypoints[i - 1];
          const auto& [t1, p1] = waypoints[i];
          const double u = (t1 > t0) ? (t - t0) / (t1 - t0) : 0.0;
          return p0 + (p1 - p0) * u;
        }
      }
      return waypoints.back().second;
    }
  }
  return {0.0, 0.0};
}

Polygon2 obstacle_pose(const ObstacleScript& script, double t, double control_dt) {
  const double t_k = std::floor(t / control_dt + 1e-9) * control_dt;
  return script.shape.polygon_at(script.motion.offset_at(t_k));
}

ctl::ReferencePath PathSpec::build() const {
  switch (kind) {
    case Kind::Waypoints:
      return ctl::ReferencePath::from_waypoints(waypoints);
    case Kind::Infinity: {
      const double range = raw_parameter_range;
      return ctl::ReferencePath::from_curve(
          [this, range](double t) {
            return geom::Point2{a * std::cos(2.0 * M_PI * t / range),
                                b * std::sin(4.0 * M_PI * t / range)};
          },
          0.0, range, 8192);
    }
    case Kind::None:
      break;
  }
  throw InvalidProblem("path spec is empty");
}

void Scenario::validate() const {
  if (duration <= 0.0) throw InvalidProblem("scenario duration must be positive");
  if (initial_states.empty()) throw InvalidProblem("scenario needs an initial state");
  if (task == TaskKind::PathFollow && path.empty()) {
    throw InvalidProblem("path-follow task needs a reference path");
  }
  if (task == TaskKind::SubregionChain) {
    if (regions.size() < 2) throw InvalidProblem("subregion chain needs at least 2 regions");
    for (std::size_t i = 0; i + 1 < regions.size(); ++i) {
      if (!geom::intersects(regions[i].workspace, regions[i + 1].workspace)) {
        throw InvalidProblem("consecutive subregions must overlap");
      }
    }
  }
}

Point2 Scenario::task_target() const {
  switch (task) {
    case TaskKind::Setpoint:
      return goal;
    case TaskKind::PathFollow:
      return path.eval(path.theta_g());
    case TaskKind::SubregionChain:
      return regions.back().goal;
  }
  return goal;
}

std::size_t subregion_supervisor(const std::vector<SubregionSpec>& chain, const Point2& p,
                                 std::size_t current) {
  std::size_t idx = current;
  while (idx + 1 < chain.size() && chain[idx + 1].workspace.strictly_contains(p, 1e-9)) {
    ++idx;
  }
  if (!chain[idx].workspace.contains(p, geom::kGeomTol)) {
    // Fall back to any region containing p before giving up.
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (chain[i].workspace.contains(p, geom::kGeomTol)) return i;
    }
    throw SupervisorLost("robot is outside every subregion");
  }
  return idx;
}

}  // namespace nav2d::sim
