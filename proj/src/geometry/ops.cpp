#include "nav2d/geometry/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nav2d::geom {

namespace {

// Clip a convex polygon by the half-plane left of the directed line a->b,
// keeping points with signed distance >= -kGeomTol.
std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, const Point2& a,
                                    const Point2& b) {
  std::vector<Point2> out;
  const Point2 dir = b - a;
  const double len = dir.norm();
  if (len < kGeomTol) return poly;
  auto sdist = [&](const Point2& p) { return dir.cross(p - a) / len; };
  const std::size_t n = poly.size();
  out.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& cur = poly[i];
    const Point2& nxt = poly[(i + 1) % n];
    const double dc = sdist(cur);
    const double dn = sdist(nxt);
    if (dc >= -kGeomTol) out.push_back(cur);
    if ((dc > kGeomTol && dn < -kGeomTol) || (dc < -kGeomTol && dn > kGeomTol)) {
      const double t = dc / (dc - dn);
      out.push_back(cur + (nxt - cur) * t);
    }
  }
  return out;
}

double ring_area(const std::vector<Point2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i].cross(v[(i + 1) % v.size()]);
  return 0.5 * s;
}

// Max ray parameter t such that x + t*u stays in the polygon (exit distance).
double ray_exit_distance(const Polygon2& poly, const Point2& x, const Point2& u) {
  double tmax = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    const Point2 d = e.b - e.a;
    const double denom = u.cross(d);
    if (std::abs(denom) < 1e-15) continue;
    const Point2 w = e.a - x;
    const double t = w.cross(d) / denom;
    const double s = w.cross(u) / denom;
    if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) tmax = std::max(tmax, t);
  }
  return tmax;
}

}  // namespace

std::optional<Polygon2> polygon_kernel(const Polygon2& poly) {
  if (poly.size() < 3) throw InvalidGeometry("kernel of invalid polygon");
  if (poly.is_convex()) return poly;

  // Start from the bounding box and clip by every edge half-plane.
  const BoundingBox box = poly.bbox();
  const double pad = 1.0;
  std::vector<Point2> region{{box.min.x - pad, box.min.y - pad},
                             {box.max.x + pad, box.min.y - pad},
                             {box.max.x + pad, box.max.y + pad},
                             {box.min.x - pad, box.max.y + pad}};
  for (std::size_t i = 0; i < poly.size() && !region.empty(); ++i) {
    const Segment e = poly.edge(i);
    region = clip_half_plane(region, e.a, e.b);
  }
  if (region.size() < 3 || ring_area(region) < 1e-12) return std::nullopt;
  return Polygon2(std::move(region), Polygon2::Validate::OrientOnly);
}

bool is_strictly_starshaped_wrt(const Polygon2& poly, const Point2& x) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly.vertex(i);
    const Point2& b = poly.vertex((i + 1) % n);
    const Point2 ua = a - x;
    const Point2 ub = b - x;
    // Edge lying along a ray from x: the ray meets the boundary in a segment.
    if (std::abs(ua.normalized().cross(ub.normalized())) <= 1e-9 && ua.dot(ub) > kGeomTol) {
      return false;
    }
  }
  // Grazing vertices: boundary touches the ray without crossing while the
  // polygon continues beyond along the same ray.
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& v = poly.vertex(i);
    const Point2 u = v - x;
    const double r = u.norm();
    if (r < kGeomTol) continue;
    const Point2 uh = u / r;
    const Point2& prev = poly.vertex((i + n - 1) % n);
    const Point2& next = poly.vertex((i + 1) % n);
    const double sp = uh.cross(prev - v);
    const double sn = uh.cross(next - v);
    if ((sp > kGeomTol && sn > kGeomTol) || (sp < -kGeomTol && sn < -kGeomTol)) {
      if (ray_exit_distance(poly, x, uh) > r + 1e-7) return false;
    }
  }
  return true;
}

std::optional<Point2> strict_star_center(const Polygon2& poly) {
  if (poly.is_convex()) return poly.centroid();
  const std::optional<Polygon2> kernel = polygon_kernel(poly);
  if (!kernel) return std::nullopt;

  std::vector<Point2> candidates;
  const Point2 c = kernel->centroid();
  candidates.push_back(c);
  for (const Point2& v : kernel->vertices()) {
    candidates.push_back(v + (c - v) * 0.5);
    candidates.push_back(v + (c - v) * 0.1);
  }
  for (const Point2& cand : candidates) {
    if (kernel->contains(cand, kGeomTol) && is_strictly_starshaped_wrt(poly, cand)) {
      return cand;
    }
  }
  return std::nullopt;
}

bool is_strictly_starshaped(const Polygon2& poly) {
  return strict_star_center(poly).has_value();
}

Polygon2 convex_hull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(),
            [](const Point2& a, const Point2& b) { return lex_less(a, b); });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Point2& a, const Point2& b) {
                             return approx_equal(a, b, 1e-12);
                           }),
               points.end());
  const std::size_t n = points.size();
  if (n < 3) throw DegenerateHull("convex hull needs at least 3 distinct points");

  auto cross3 = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a - o).cross(b - o);
  };
  std::vector<Point2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross3(hull[k - 2], hull[k - 1], points[i]) <= kGeomTol) --k;
    hull[k++] = points[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross3(hull[k - 2], hull[k - 1], points[i]) <= kGeomTol) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateHull("collinear input");
  return Polygon2(std::move(hull), Polygon2::Validate::OrientOnly);
}

double distance(const Polygon2& a, const Point2& p) { return a.distance_to(p); }

double distance(const Polygon2& a, const Segment& s) {
  if (a.contains(s.a, 0.0) || a.contains(s.b, 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::min(best, distance(a.edge(i), s));
    if (best == 0.0) break;
  }
  return best;
}

double distance(const Polygon2& a, const Polygon2& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  const BoundingBox ba = a.bbox();
  const BoundingBox bb = b.bbox();
  const double dx = std::max({0.0, ba.min.x - bb.max.x, bb.min.x - ba.max.x});
  const double dy = std::max({0.0, ba.min.y - bb.max.y, bb.min.y - ba.max.y});
  const double lower = std::hypot(dx, dy);
  if (lower == 0.0 && intersects(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Segment ea = a.edge(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      best = std::min(best, distance(ea, b.edge(j)));
    }
  }
  return best;
}

double signed_clearance(const Point2& p, const Region& workspace, const PolyList& obstacles) {
  double best = std::numeric_limits<double>::infinity();
  if (workspace.is_polygon()) best = workspace.poly().boundary_distance(p);
  for (const Polygon2& o : obstacles) best = std::min(best, o.boundary_distance(p));
  return best;
}

double signed_free_clearance(const Point2& p, const Region& workspace,
                             const PolyList& obstacles) {
  double best = std::numeric_limits<double>::infinity();
  if (workspace.is_empty_set()) return -std::numeric_limits<double>::infinity();
  if (workspace.is_polygon()) {
    const double bd = workspace.poly().boundary_distance(p);
    best = workspace.poly().contains(p, 0.0) ? bd : -bd;
  }
  for (const Polygon2& o : obstacles) {
    const double bd = o.boundary_distance(p);
    best = std::min(best, o.contains(p, 0.0) ? -bd : bd);
  }
  return best;
}

bool free_closure_contains(const Point2& p, const Region& workspace, const PolyList& obstacles,
                           double tol) {
  if (!workspace.contains(p, tol)) return false;
  for (const Polygon2& o : obstacles) {
    if (o.strictly_contains(p, tol)) return false;
  }
  return true;
}

bool free_set_contains(const Point2& p, const Region& workspace, const PolyList& obstacles) {
  if (!workspace.contains(p, 0.0)) return false;
  for (const Polygon2& o : obstacles) {
    if (o.contains(p, 0.0)) return false;
  }
  return true;
}

Point2 project_to_free_set(const Point2& p, const Region& workspace,
                           const PolyList& obstacles) {
  if (free_closure_contains(p, workspace, obstacles)) return p;
  if (workspace.is_empty_set()) throw InvalidGeometry("projection into empty workspace");

  if (workspace.is_full_plane()) {
    // p sits inside the obstacle union; project onto the union boundary.
    return union_all(obstacles).closest_boundary_point(p);
  }
  const PolygonSet target =
      boolean_op(PolygonSet(workspace.poly()), union_all(obstacles), BoolOp::Difference);
  if (target.empty()) throw InvalidGeometry("free set is empty");
  return target.closest_point(p);
}

}  // namespace nav2d::geom
