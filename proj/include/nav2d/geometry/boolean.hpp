#pragma once

#include <vector>

#include "nav2d/geometry/types.hpp"

namespace nav2d::geom {

/// One connected component of a polygon set: an outer ring plus holes.
struct HoledPolygon {
  Polygon2 outer;
  PolyList holes;

  double area() const;
  bool contains(const Point2& p, double tol = kGeomTol) const;
};

/// A (possibly disconnected, possibly holed) polygonal region. Produced by
/// the boolean operations; plain Polygon2 is used wherever holes cannot occur.
class PolygonSet {
 public:
  PolygonSet() = default;
  explicit PolygonSet(Polygon2 poly);
  explicit PolygonSet(const PolyList& polys);  // union of the inputs
  static PolygonSet from_parts(std::vector<HoledPolygon> parts);

  bool empty() const { return parts_.empty(); }
  const std::vector<HoledPolygon>& parts() const { return parts_; }
  double area() const;
  Point2 centroid() const;
  BoundingBox bbox() const;
  bool has_holes() const;

  /// Outer rings only; holes are dropped.
  PolyList outer_polygons() const;

  /// Closed membership (hole boundaries count as inside).
  bool contains(const Point2& p, double tol = kGeomTol) const;

  /// Distance from p to the set (0 when contained).
  double distance_to(const Point2& p) const;

  /// Closest point of the set to p; ties broken lexicographically (x then y).
  Point2 closest_point(const Point2& p) const;

  /// Closest point on any ring of the set, regardless of containment.
  Point2 closest_boundary_point(const Point2& p) const;

 private:
  std::vector<HoledPolygon> parts_;
};

enum class BoolOp { Union, Intersection, Difference };

PolygonSet boolean_op(const PolygonSet& a, const PolygonSet& b, BoolOp op);
PolygonSet boolean_op(const PolyList& a, const PolyList& b, BoolOp op);
PolygonSet union_all(const PolyList& polys);

/// True when the closed sets intersect (shared boundary points count).
bool intersects(const Polygon2& a, const Polygon2& b);

/// area(a \ b) <= tol * max(area(a), 1), i.e. a is covered by b.
bool covered_by(const PolygonSet& a, const PolygonSet& b, double tol = 1e-9);
bool covered_by(const Polygon2& a, const Polygon2& b, double tol = 1e-9);

/// Intersection points of two polygon boundaries (for diagnostics/tests).
std::vector<Point2> boundary_intersections(const Polygon2& a, const Polygon2& b);

/// Minkowski sum with a closed disk of radius rho >= 0. Outer approximation:
/// the result contains the exact sum. Interior voids that a narrow cavity
/// closes over are filled.
Polygon2 inflate(const Polygon2& poly, double rho);

/// Inward offset of a workspace by rho >= 0. Inner approximation (result is
/// contained by the exact erosion). FullPlane maps to FullPlane; a vanished
/// workspace yields an empty polygon region. When erosion splits the
/// workspace, the largest piece is kept.
Region erode_workspace(const Region& workspace, double rho);

/// True when the eroded region is empty (only meaningful for polygon input).
bool region_is_empty(const Region& r);

}  // namespace nav2d::geom
