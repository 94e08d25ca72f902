#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nav2d/control/reference_path.hpp"
#include "nav2d/geometry/types.hpp"
#include "nav2d/mpc/mpc.hpp"
#include "nav2d/sim/unicycle.hpp"

namespace nav2d::sim {

/// Obstacle/workspace geometry; disks stay analytic until polygonized so the
/// baseline's no-go constraints can use exact distances.
struct ShapeSpec {
  enum class Kind { Disk, Polygon };
  Kind kind = Kind::Disk;
  geom::Point2 center;
  double radius = 0.5;
  geom::Polygon2 polygon;

  static ShapeSpec disk(const geom::Point2& c, double r);
  static ShapeSpec from_polygon(geom::Polygon2 poly);

  geom::Polygon2 polygon_at(const geom::Point2& offset) const;
  mpc::PredictedShape predicted_at(const geom::Point2& offset) const;
};

struct MotionSpec {
  enum class Kind { Static, Linear, Waypoints };
  Kind kind = Kind::Static;
  geom::Point2 velocity;                                  // Linear
  std::vector<std::pair<double, geom::Point2>> waypoints;  // Waypoints: (t, offset)

  /// Translation offset at time t (piecewise linear for waypoints).
  geom::Point2 offset_at(double t) const;
};

struct ObstacleScript {
  ShapeSpec shape;
  MotionSpec motion;
  double active_from = 0.0;
  double active_to = std::numeric_limits<double>::infinity();

  bool active_at(double t) const { return t >= active_from && t <= active_to; }
};

/// Obstacle shape at the zero-order-hold time of the most recent control
/// sample (Assumption 1: poses constant over a sampling period).
geom::Polygon2 obstacle_pose(const ObstacleScript& script, double t, double control_dt);

struct WorkspaceSpec {
  enum class Kind { FullPlane, Fixed, RobotCentered };
  Kind kind = Kind::FullPlane;
  geom::Region fixed = geom::Region::full_plane();
  double robot_radius = 4.0;  // RobotCentered: W(t) = B[p(t), radius]
};

struct SubregionSpec {
  geom::Polygon2 workspace;
  geom::Point2 goal;
};

enum class TaskKind { Setpoint, PathFollow, SubregionChain };
enum class ControllerKind { Proposed, StandardMppfc };

/// Serializable reference-path description; `build` produces the arc-length
/// parametrization.
struct PathSpec {
  enum class Kind { None, Waypoints, Infinity };
  Kind kind = Kind::None;
  std::vector<geom::Point2> waypoints;
  // Figure-eight gamma(t) = [a cos(2 pi t / T), b sin(4 pi t / T)], t in [0, T].
  double a = 6.0;
  double b = 3.0;
  double raw_parameter_range = 36.5;

  ctl::ReferencePath build() const;
};

struct Scenario {
  std::string name = "scenario";
  WorkspaceSpec workspace;
  std::vector<ObstacleScript> obstacles;
  TaskKind task = TaskKind::Setpoint;
  geom::Point2 goal;                    // Setpoint
  PathSpec path_spec;                   // PathFollow (serializable form)
  ctl::ReferencePath path;              // PathFollow (built at load)
  std::vector<SubregionSpec> regions;   // SubregionChain
  std::vector<UnicycleState> initial_states{UnicycleState{}};
  double duration = 60.0;
  ControllerKind controller = ControllerKind::Proposed;

  void validate() const;
  geom::Point2 task_target() const;
};

/// Advances the active subregion when p enters the interior of the next one.
/// Returns the updated index; throws SupervisorLost when p is in no region.
std::size_t subregion_supervisor(const std::vector<SubregionSpec>& chain,
                                 const geom::Point2& p, std::size_t current);

}  // namespace nav2d::sim
