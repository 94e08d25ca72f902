#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "nav2d/errors.hpp"

namespace nav2d::geom {

/// Incidence tolerance shared by all geometric predicates [m].
inline constexpr double kGeomTol = 1e-9;

/// Max deviation between a circular arc and its polyline approximation [m].
inline constexpr double kArcSagitta = 1e-4;

/// Minimum number of segments when polygonizing a disk.
inline constexpr int kMinDiskSegments = 64;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2() = default;
  Point2(double px, double py) : x(px), y(py) {}

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2 operator/(double s) const { return {x / s, y / s}; }
  Point2 operator-() const { return {-x, -y}; }
  Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }

  double dot(const Point2& o) const { return x * o.x + y * o.y; }
  double cross(const Point2& o) const { return x * o.y - y * o.x; }
  double squared_norm() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  /// Counterclockwise 90-degree rotation.
  Point2 perp() const { return {-y, x}; }
  Point2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Point2{x / n, y / n} : Point2{0.0, 0.0};
  }
  Point2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Point2 operator*(double s, const Point2& p) { return p * s; }

inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

/// Strict lexicographic order (x, then y); used for deterministic tie-breaks.
inline bool lex_less(const Point2& a, const Point2& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

inline bool approx_equal(const Point2& a, const Point2& b, double tol = kGeomTol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

struct Segment {
  Point2 a;
  Point2 b;

  Segment() = default;
  Segment(const Point2& pa, const Point2& pb) : a(pa), b(pb) {}

  double length() const { return distance(a, b); }
  Point2 at(double t) const { return a + (b - a) * t; }

  /// Closest point of the segment to p (degenerate segments allowed).
  Point2 closest_point(const Point2& p) const {
    const Point2 d = b - a;
    const double len2 = d.squared_norm();
    if (len2 <= 0.0) return a;
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return a + d * t;
  }
  double distance_to(const Point2& p) const { return distance(p, closest_point(p)); }
};

double distance(const Segment& s, const Point2& p);
double distance(const Segment& s1, const Segment& s2);
bool segments_intersect(const Segment& s1, const Segment& s2, double tol = kGeomTol);

struct BoundingBox {
  Point2 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void expand(const Point2& p) {
    min.x = std::min(min.x, p.x);
    min.y = std::min(min.y, p.y);
    max.x = std::max(max.x, p.x);
    max.y = std::max(max.y, p.y);
  }
  bool contains(const Point2& p, double tol = 0.0) const {
    return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol;
  }
};

/// Simple polygon with counterclockwise orientation and no duplicate
/// consecutive vertices. The boundary is implicitly closed.
class Polygon2 {
 public:
  enum class Validate { Full, OrientOnly, None };

  Polygon2() = default;

  /// Normalizes (dedup + CCW) and, with Validate::Full, rejects polygons with
  /// fewer than 3 vertices or self-intersecting boundaries.
  explicit Polygon2(std::vector<Point2> vertices, Validate mode = Validate::Full);

  /// Wraps vertices known to already form a valid CCW simple polygon.
  static Polygon2 unchecked(std::vector<Point2> vertices);

  bool empty() const { return verts_.empty(); }
  std::size_t size() const { return verts_.size(); }
  const std::vector<Point2>& vertices() const { return verts_; }
  const Point2& vertex(std::size_t i) const { return verts_[i]; }
  Segment edge(std::size_t i) const { return {verts_[i], verts_[(i + 1) % verts_.size()]}; }

  double area() const;
  Point2 centroid() const;
  BoundingBox bbox() const;
  bool is_convex(double tol = kGeomTol) const;

  /// Closed membership test (boundary points count as inside).
  bool contains(const Point2& p, double tol = kGeomTol) const;
  /// Interior membership: inside and farther than tol from the boundary.
  bool strictly_contains(const Point2& p, double tol = kGeomTol) const;
  /// Distance from p to the polygon boundary (positive inside and outside).
  double boundary_distance(const Point2& p) const;
  /// Distance from p to the polygon as a filled set (0 inside).
  double distance_to(const Point2& p) const;

  bool operator==(const Polygon2& o) const { return verts_ == o.verts_; }

 private:
  std::vector<Point2> verts_;
};

using PolyList = std::vector<Polygon2>;

enum class ArcFit {
  Outer,  ///< circumscribed polyline: polygon contains the disk
  Inner   ///< inscribed polyline: polygon contained by the disk
};

/// Polygonal approximation of a disk with arc deviation at most kArcSagitta.
Polygon2 polygonize_disk(const Point2& center, double radius, ArcFit fit);

/// Workspace / shape carrier: a polygon (disks are polygonized at
/// construction), the full Euclidean plane, or the empty set (a workspace
/// eroded to nothing).
class Region {
 public:
  enum class Kind { FullPlane, Polygon, Empty };

  Region() = default;

  static Region full_plane() { return Region(); }
  static Region empty_set();
  static Region polygon(Polygon2 poly);
  static Region disk(const Point2& center, double radius, ArcFit fit = ArcFit::Inner);

  Kind kind() const { return kind_; }
  bool is_full_plane() const { return kind_ == Kind::FullPlane; }
  bool is_empty_set() const { return kind_ == Kind::Empty; }
  bool is_polygon() const { return kind_ == Kind::Polygon; }
  const Polygon2& poly() const;

  /// Closed membership; the full plane contains everything.
  bool contains(const Point2& p, double tol = kGeomTol) const;

  bool operator==(const Region& o) const { return kind_ == o.kind_ && poly_ == o.poly_; }

 private:
  Kind kind_ = Kind::FullPlane;
  Polygon2 poly_;
};

}  // namespace nav2d::geom
