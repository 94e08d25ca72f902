#include "nav2d/geometry/types.hpp"

#include <algorithm>
#include <cmath>

namespace nav2d::geom {

namespace {

double signed_area(const std::vector<Point2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    s += a.cross(b);
  }
  return 0.5 * s;
}

// Orientation of c relative to directed line a->b.
double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b - a).cross(c - a);
}

bool boundary_is_simple(const std::vector<Point2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Segment si{v[i], v[(i + 1) % n]};
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Segment sj{v[j], v[(j + 1) % n]};
      if (adjacent) {
        // Adjacent edges may only meet at the shared endpoint; a fold-back
        // (zero-angle spike) overlaps the previous edge.
        const Point2 di = (si.b - si.a).normalized();
        const Point2 dj = (sj.b - sj.a).normalized();
        if (std::abs(di.cross(dj)) <= kGeomTol && di.dot(dj) < 0.0) return false;
        continue;
      }
      if (segments_intersect(si, sj)) return false;
    }
  }
  return true;
}

}  // namespace

double distance(const Segment& s, const Point2& p) { return s.distance_to(p); }

bool segments_intersect(const Segment& s1, const Segment& s2, double tol) {
  const double d1 = orient(s2.a, s2.b, s1.a);
  const double d2 = orient(s2.a, s2.b, s1.b);
  const double d3 = orient(s1.a, s1.b, s2.a);
  const double d4 = orient(s1.a, s1.b, s2.b);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))) {
    return true;
  }
  return distance(s1, s2) <= tol;
}

double distance(const Segment& s1, const Segment& s2) {
  // Proper crossing => distance 0; otherwise the minimum is at an endpoint.
  const double d1 = orient(s2.a, s2.b, s1.a);
  const double d2 = orient(s2.a, s2.b, s1.b);
  const double d3 = orient(s1.a, s1.b, s2.a);
  const double d4 = orient(s1.a, s1.b, s2.b);
  if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
      d4 != 0) {
    return 0.0;
  }
  return std::min(std::min(s1.distance_to(s2.a), s1.distance_to(s2.b)),
                  std::min(s2.distance_to(s1.a), s2.distance_to(s1.b)));
}

Polygon2::Polygon2(std::vector<Point2> vertices, Validate mode) {
  // Drop duplicate consecutive vertices (incl. a last == first closure).
  std::vector<Point2> v;
  v.reserve(vertices.size());
  for (const Point2& p : vertices) {
    if (!p.is_finite()) throw InvalidGeometry("polygon vertex is not finite");
    if (v.empty() || !approx_equal(v.back(), p)) v.push_back(p);
  }
  while (v.size() > 1 && approx_equal(v.front(), v.back())) v.pop_back();

  if (v.size() < 3) throw InvalidGeometry("polygon needs at least 3 distinct vertices");
  if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
  if (mode == Validate::Full && !boundary_is_simple(v)) {
    throw InvalidGeometry("polygon boundary is self-intersecting");
  }
  verts_ = std::move(v);
}

Polygon2 Polygon2::unchecked(std::vector<Point2> vertices) {
  Polygon2 p;
  p.verts_ = std::move(vertices);
  return p;
}

double Polygon2::area() const {
  if (verts_.size() < 3) return 0.0;
  return signed_area(verts_);
}

Point2 Polygon2::centroid() const {
  double a = 0.0;
  Point2 c{0.0, 0.0};
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    const Point2& p = verts_[i];
    const Point2& q = verts_[(i + 1) % verts_.size()];
    const double w = p.cross(q);
    a += w;
    c += (p + q) * w;
  }
  if (std::abs(a) < 1e-300) {
    // Degenerate: fall back to the vertex mean.
    Point2 m{0.0, 0.0};
    for (const Point2& p : verts_) m += p;
    return m / static_cast<double>(verts_.size());
  }
  return c / (3.0 * a);
}

BoundingBox Polygon2::bbox() const {
  BoundingBox box;
  for (const Point2& p : verts_) box.expand(p);
  return box;
}

bool Polygon2::is_convex(double tol) const {
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = verts_[i];
    const Point2& b = verts_[(i + 1) % n];
    const Point2& c = verts_[(i + 2) % n];
    if (orient(a, b, c) < -tol) return false;
  }
  return true;
}

bool Polygon2::contains(const Point2& p, double tol) const {
  const std::size_t n = verts_.size();
  if (n < 3) return false;
  // Boundary proximity counts as inside.
  if (boundary_distance(p) <= tol) return true;
  // Crossing number, robust because the boundary case is already handled.
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = verts_[i];
    const Point2& b = verts_[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool Polygon2::strictly_contains(const Point2& p, double tol) const {
  return contains(p, 0.0) && boundary_distance(p) > tol;
}

double Polygon2::boundary_distance(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    best = std::min(best, edge(i).distance_to(p));
  }
  return best;
}

double Polygon2::distance_to(const Point2& p) const {
  if (contains(p, 0.0)) return 0.0;
  return boundary_distance(p);
}

Polygon2 polygonize_disk(const Point2& center, double radius, ArcFit fit) {
  if (!(radius > 0.0)) throw InvalidGeometry("disk radius must be positive");
  // Choose the segment count from the sagitta bound.
  const double s = kArcSagitta;
  double theta;
  if (fit == ArcFit::Inner) {
    theta = (s < radius) ? 2.0 * std::acos(1.0 - s / radius) : 2.0;
  } else {
    theta = 2.0 * std::acos(radius / (radius + s));
  }
  int n = std::max(kMinDiskSegments, static_cast<int>(std::ceil(2.0 * M_PI / theta)));
  const double step = 2.0 * M_PI / n;
  const double r = (fit == ArcFit::Inner) ? radius : radius / std::cos(0.5 * step);
  std::vector<Point2> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = step * i;
    v.push_back(center + Point2{r * std::cos(a), r * std::sin(a)});
  }
  return Polygon2::unchecked(std::move(v));
}

Region Region::empty_set() {
  Region r;
  r.kind_ = Kind::Empty;
  return r;
}

Region Region::polygon(Polygon2 poly) {
  Region r;
  r.kind_ = Kind::Polygon;
  r.poly_ = std::move(poly);
  return r;
}

Region Region::disk(const Point2& center, double radius, ArcFit fit) {
  return polygon(polygonize_disk(center, radius, fit));
}

const Polygon2& Region::poly() const {
  if (kind_ != Kind::Polygon) throw InvalidGeometry("region has no polygon");
  return poly_;
}

bool Region::contains(const Point2& p, double tol) const {
  switch (kind_) {
    case Kind::FullPlane:
      return true;
    case Kind::Empty:
      return false;
    case Kind::Polygon:
      return poly_.contains(p, tol);
  }
  return false;
}

}  // namespace nav2d::geom
