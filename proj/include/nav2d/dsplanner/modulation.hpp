#pragma once

#include <optional>
#include <vector>

#include "nav2d/geometry/types.hpp"
#include "nav2d/starworld/starworld.hpp"

namespace nav2d::ds {

/// Modulated goal-attracting dynamics eta(r) = M(r, E*) (r^g - r) over a
/// star world. Per obstacle, the distance function Gamma >= 1 is measured
/// radially from a kernel-interior reference point; the modulation basis is
/// {radial direction, boundary tangent} with eigenvalues (1 - 1/Gamma,
/// 1 + 1/Gamma). Obstacle contributions are blended by Gamma-proximity
/// weights in direction/magnitude space, so the flow is tangent on every
/// boundary and goal-attracting in free space. A bounded workspace enters as
/// an inverted obstacle.
class ModulationField {
 public:
  ModulationField(const star::StarWorld& world, const geom::Point2& goal);

  /// eta(r); throws OutsideFreeSpace when r penetrates an obstacle or exits
  /// the workspace beyond tolerance.
  geom::Point2 eval(const geom::Point2& r) const;

  /// eta(r) with penetrations clamped to the boundary instead of throwing
  /// (for integrator stage points that may cut corners).
  geom::Point2 eval_clamped(const geom::Point2& r) const;

  /// eta / |eta|; zero vector at the goal.
  geom::Point2 eval_normalized(const geom::Point2& r) const;

  /// Distance function of obstacle i at r (>= 1 outside, 1 on the boundary).
  double gamma(std::size_t obstacle_index, const geom::Point2& r) const;
  /// Inverted distance function of the workspace (>= 1 inside), or nullopt
  /// for the full plane.
  std::optional<double> workspace_gamma(const geom::Point2& r) const;

  std::size_t obstacle_count() const { return obstacles_.size(); }
  const geom::Point2& goal() const { return goal_; }
  const geom::Point2& reference_point(std::size_t i) const { return obstacles_[i].ref; }

  /// Copy with obstacle reference points nudged 1e-6 m off the segment
  /// l[r0, goal] (the degenerate alignment breaks convergence guarantees).
  ModulationField with_references_off_segment(const geom::Point2& r0) const;

  /// Radial projection of r onto the boundary of obstacle i (used by the
  /// integration guard).
  geom::Point2 project_outside(std::size_t obstacle_index, const geom::Point2& r,
                               double margin) const;
  /// Radial projection of r into the workspace.
  geom::Point2 project_into_workspace(const geom::Point2& r, double margin) const;

 private:
  struct StarGeometry {
    geom::Point2 ref;
    // Per-vertex angle (ascending, rotated) and per-edge outward normal and
    // offset n . (v - ref) in the rotated order.
    std::vector<double> angles;
    std::vector<geom::Point2> normals;
    std::vector<double> offsets;
    std::vector<geom::Point2> verts;
    bool monotone = true;  // false => brute-force ray casting fallback

    std::size_t sector(const geom::Point2& r) const;
    double boundary_radius(const geom::Point2& r) const;
  };

  static StarGeometry build_geometry(const geom::Polygon2& poly, const geom::Point2& ref_hint);

  geom::Point2 eval_impl(const geom::Point2& r, bool clamp) const;

  geom::Point2 goal_;
  std::vector<StarGeometry> obstacles_;
  std::optional<StarGeometry> workspace_;
};

}  // namespace nav2d::ds
