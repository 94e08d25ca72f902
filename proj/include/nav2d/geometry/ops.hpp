#pragma once

#include <optional>
#include <vector>

#include "nav2d/geometry/boolean.hpp"
#include "nav2d/geometry/types.hpp"

namespace nav2d::geom {

/// Kernel of a simple polygon: the set of points seeing the whole polygon.
/// Computed as the intersection of all edge half-planes; convex by
/// construction. Returns nullopt when the kernel is empty (kernels thinner
/// than the geometric tolerance count as empty). Convex input returns the
/// input polygon itself.
std::optional<Polygon2> polygon_kernel(const Polygon2& poly);

/// A kernel point from which every ray crosses the boundary exactly once,
/// or nullopt if none of the tried candidates qualifies.
std::optional<Point2> strict_star_center(const Polygon2& poly);

/// True iff the kernel is nonempty and some kernel point has the
/// single-crossing property.
bool is_strictly_starshaped(const Polygon2& poly);

/// True when the ray test holds for the given kernel point.
bool is_strictly_starshaped_wrt(const Polygon2& poly, const Point2& x);

/// Minimal convex polygon containing the points (CCW). Throws DegenerateHull
/// when the input is collinear.
Polygon2 convex_hull(std::vector<Point2> points);

/// Euclidean set distances (0 when the operands intersect).
double distance(const Polygon2& a, const Polygon2& b);
double distance(const Polygon2& a, const Point2& p);
double distance(const Polygon2& a, const Segment& s);

/// Distance from p to the free-set boundary of {workspace, obstacles}:
/// the minimum over the workspace boundary and all obstacle boundaries,
/// measured unsigned.
double signed_clearance(const Point2& p, const Region& workspace, const PolyList& obstacles);

/// Signed variant for collision monitoring: negative when p penetrates an
/// obstacle or leaves the workspace, otherwise the clearance.
double signed_free_clearance(const Point2& p, const Region& workspace,
                             const PolyList& obstacles);

/// Closed free-set membership: inside the workspace (boundary included) and
/// in no obstacle interior. The natural domain for reference points.
bool free_closure_contains(const Point2& p, const Region& workspace, const PolyList& obstacles,
                           double tol = kGeomTol);

/// Strict free-set membership (F = W \ O with O closed): obstacle boundary
/// points are collisions.
bool free_set_contains(const Point2& p, const Region& workspace, const PolyList& obstacles);

/// Closest point of the closed free set to p (p itself when already free).
/// Throws InvalidGeometry when the free set is empty.
Point2 project_to_free_set(const Point2& p, const Region& workspace, const PolyList& obstacles);

}  // namespace nav2d::geom
