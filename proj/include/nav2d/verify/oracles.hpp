#pragma once

#include <optional>
#include <vector>

#include "nav2d/geometry/ops.hpp"
#include "nav2d/geometry/types.hpp"
#include "nav2d/util/rng.hpp"

namespace nav2d::verify {

/// Brute-force visibility kernel on a grid: a grid point belongs to the
/// kernel when the segment to every boundary sample stays inside the
/// polygon. Deliberately independent of the half-plane implementation.
struct GridKernelResult {
  int kernel_cells = 0;       // oracle kernel cell count
  int impl_cells = 0;         // implementation kernel cell count
  int both_cells = 0;         // agreement count
  double iou = 1.0;           // both empty => 1.0
  bool both_empty = false;
};

GridKernelResult grid_kernel_iou(const geom::Polygon2& poly,
                                 const std::optional<geom::Polygon2>& impl_kernel,
                                 double grid_step, double boundary_step);

/// True when the segment from x to y does not properly cross any edge.
bool segment_visible(const geom::Polygon2& poly, const geom::Point2& x, const geom::Point2& y);

/// Random simple polygon generators used by the property suites.
geom::Polygon2 random_star_polygon(util::Rng& rng, const geom::Point2& center, double r_min,
                                   double r_max, int min_verts = 5, int max_verts = 12);
geom::Polygon2 random_l_shape(util::Rng& rng, const geom::Point2& center, double scale);
/// Comb-like rectilinear polygon with an empty kernel.
geom::Polygon2 comb_polygon(const geom::Point2& origin, double scale);
/// Mixed distribution over the above (star / L / comb).
geom::Polygon2 random_simple_polygon(util::Rng& rng, const geom::Point2& center, double scale);

}  // namespace nav2d::verify
