#include "nav2d/geometry/boolean.hpp"

// Disable the legacy coordinate-rescaling robustness layer: it perturbs
// outputs by ~1e-7 which breaks the exact-within-tolerance area contracts.
#define BOOST_GEOMETRY_NO_ROBUSTNESS

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <algorithm>
#include <cmath>

namespace nav2d::geom {

namespace bg = boost::geometry;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPoly = bg::model::polygon<BPoint, false, true>;  // ccw, closed
using BMulti = bg::model::multi_polygon<BPoly>;

// Output rings smaller than this are numerical slivers and get dropped.
constexpr double kSliverArea = 1e-12;

void append_ring(const std::vector<Point2>& verts, BPoly::ring_type& ring) {
  ring.reserve(verts.size() + 1);
  for (const Point2& p : verts) ring.emplace_back(p.x, p.y);
  if (!verts.empty()) ring.emplace_back(verts.front().x, verts.front().y);
}

BPoly to_bpoly(const Polygon2& poly) {
  BPoly out;
  append_ring(poly.vertices(), out.outer());
  return out;
}

BPoly to_bpoly(const HoledPolygon& hp) {
  BPoly out;
  append_ring(hp.outer.vertices(), out.outer());
  out.inners().resize(hp.holes.size());
  for (std::size_t i = 0; i < hp.holes.size(); ++i) {
    // Holes are clockwise in a ccw polygon.
    std::vector<Point2> rev(hp.holes[i].vertices().rbegin(), hp.holes[i].vertices().rend());
    append_ring(rev, out.inners()[i]);
  }
  return out;
}

BMulti to_bmulti(const PolygonSet& set) {
  BMulti out;
  out.reserve(set.parts().size());
  for (const HoledPolygon& hp : set.parts()) out.push_back(to_bpoly(hp));
  return out;
}

std::vector<Point2> ring_to_verts(const BPoly::ring_type& ring) {
  std::vector<Point2> v;
  v.reserve(ring.size());
  for (const BPoint& p : ring) v.emplace_back(bg::get<0>(p), bg::get<1>(p));
  // Drop the closing vertex and near-duplicates.
  std::vector<Point2> clean;
  clean.reserve(v.size());
  for (const Point2& p : v) {
    if (clean.empty() || !approx_equal(clean.back(), p, 1e-12)) clean.push_back(p);
  }
  while (clean.size() > 1 && approx_equal(clean.front(), clean.back(), 1e-12)) clean.pop_back();
  return clean;
}

std::vector<HoledPolygon> from_bmulti(const BMulti& multi) {
  std::vector<HoledPolygon> parts;
  parts.reserve(multi.size());
  for (const BPoly& bp : multi) {
    if (std::abs(bg::area(bp)) < kSliverArea) continue;
    std::vector<Point2> outer = ring_to_verts(bp.outer());
    if (outer.size() < 3) continue;
    HoledPolygon hp;
    hp.outer = Polygon2(std::move(outer), Polygon2::Validate::OrientOnly);
    for (const auto& inner : bp.inners()) {
      std::vector<Point2> hole = ring_to_verts(inner);
      if (hole.size() < 3) continue;
      Polygon2 h(std::move(hole), Polygon2::Validate::OrientOnly);
      if (h.area() >= kSliverArea) hp.holes.push_back(std::move(h));
    }
    parts.push_back(std::move(hp));
  }
  return parts;
}

BMulti run_op(const BMulti& a, const BMulti& b, BoolOp op) {
  BMulti out;
  switch (op) {
    case BoolOp::Union:
      bg::union_(a, b, out);
      break;
    case BoolOp::Intersection:
      bg::intersection(a, b, out);
      break;
    case BoolOp::Difference:
      bg::difference(a, b, out);
      break;
  }
  return out;
}

}  // namespace

double HoledPolygon::area() const {
  double a = outer.area();
  for (const Polygon2& h : holes) a -= h.area();
  return a;
}

bool HoledPolygon::contains(const Point2& p, double tol) const {
  if (!outer.contains(p, tol)) return false;
  for (const Polygon2& h : holes) {
    if (h.strictly_contains(p, tol)) return false;
  }
  return true;
}

PolygonSet::PolygonSet(Polygon2 poly) {
  if (!poly.empty()) parts_.push_back(HoledPolygon{std::move(poly), {}});
}

PolygonSet::PolygonSet(const PolyList& polys) { *this = union_all(polys); }

PolygonSet PolygonSet::from_parts(std::vector<HoledPolygon> parts) {
  PolygonSet s;
  s.parts_ = std::move(parts);
  return s;
}

double PolygonSet::area() const {
  double a = 0.0;
  for (const HoledPolygon& hp : parts_) a += hp.area();
  return a;
}

Point2 PolygonSet::centroid() const {
  double total = 0.0;
  Point2 acc{0.0, 0.0};
  for (const HoledPolygon& hp : parts_) {
    const double ao = hp.outer.area();
    total += ao;
    acc += hp.outer.centroid() * ao;
    for (const Polygon2& h : hp.holes) {
      const double ah = h.area();
      total -= ah;
      acc -= h.centroid() * ah;
    }
  }
  if (std::abs(total) < 1e-300) throw InvalidGeometry("centroid of empty polygon set");
  return acc / total;
}

BoundingBox PolygonSet::bbox() const {
  BoundingBox box;
  for (const HoledPolygon& hp : parts_) {
    for (const Point2& p : hp.outer.vertices()) box.expand(p);
  }
  return box;
}

bool PolygonSet::has_holes() const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [](const HoledPolygon& hp) { return !hp.holes.empty(); });
}

PolyList PolygonSet::outer_polygons() const {
  PolyList out;
  out.reserve(parts_.size());
  for (const HoledPolygon& hp : parts_) out.push_back(hp.outer);
  return out;
}

bool PolygonSet::contains(const Point2& p, double tol) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const HoledPolygon& hp) { return hp.contains(p, tol); });
}

double PolygonSet::distance_to(const Point2& p) const {
  if (contains(p, 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const HoledPolygon& hp : parts_) {
    best = std::min(best, hp.outer.boundary_distance(p));
    for (const Polygon2& h : hp.holes) best = std::min(best, h.boundary_distance(p));
  }
  return best;
}

Point2 PolygonSet::closest_point(const Point2& p) const {
  if (contains(p, 0.0)) return p;
  return closest_boundary_point(p);
}

Point2 PolygonSet::closest_boundary_point(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  Point2 arg{0.0, 0.0};
  bool found = false;
  auto consider = [&](const Polygon2& ring) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point2 q = ring.edge(i).closest_point(p);
      const double d = distance(q, p);
      if (d < best - kGeomTol || (d <= best + kGeomTol && (!found || lex_less(q, arg)))) {
        best = d;
        arg = q;
        found = true;
      }
    }
  };
  for (const HoledPolygon& hp : parts_) {
    consider(hp.outer);
    for (const Polygon2& h : hp.holes) consider(h);
  }
  if (!found) throw InvalidGeometry("closest point on empty polygon set");
  return arg;
}

PolygonSet boolean_op(const PolygonSet& a, const PolygonSet& b, BoolOp op) {
  const BMulti out = run_op(to_bmulti(a), to_bmulti(b), op);
  return PolygonSet::from_parts(from_bmulti(out));
}

PolygonSet boolean_op(const PolyList& a, const PolyList& b, BoolOp op) {
  // Self-union each side first so overlapping inputs are well-formed.
  return boolean_op(union_all(a), union_all(b), op);
}

PolygonSet union_all(const PolyList& polys) {
  // Balanced tree merge; the incremental variant is quadratic in ring size.
  std::vector<BMulti> level;
  level.reserve(polys.size());
  for (const Polygon2& p : polys) {
    if (p.empty()) continue;
    BMulti m;
    m.push_back(to_bpoly(p));
    level.push_back(std::move(m));
  }
  if (level.empty()) return {};
  while (level.size() > 1) {
    std::vector<BMulti> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      BMulti merged;
      bg::union_(level[i], level[i + 1], merged);
      next.push_back(std::move(merged));
    }
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return PolygonSet::from_parts(from_bmulti(level.front()));
}

bool intersects(const Polygon2& a, const Polygon2& b) {
  if (a.empty() || b.empty()) return false;
  return bg::intersects(to_bpoly(a), to_bpoly(b));
}

bool covered_by(const PolygonSet& a, const PolygonSet& b, double tol) {
  if (a.empty()) return true;
  const PolygonSet left = boolean_op(a, b, BoolOp::Difference);
  return left.area() <= tol * std::max(a.area(), 1.0);
}

bool covered_by(const Polygon2& a, const Polygon2& b, double tol) {
  return covered_by(PolygonSet(a), PolygonSet(b), tol);
}

std::vector<Point2> boundary_intersections(const Polygon2& a, const Polygon2& b) {
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Segment sa = a.edge(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Segment sb = b.edge(j);
      const Point2 r = sa.b - sa.a;
      const Point2 s = sb.b - sb.a;
      const double denom = r.cross(s);
      if (std::abs(denom) < 1e-15) continue;
      const Point2 qp = sb.a - sa.a;
      const double t = qp.cross(s) / denom;
      const double u = qp.cross(r) / denom;
      if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) pts.push_back(sa.at(t));
    }
  }
  return pts;
}

namespace {

BMulti buffer_multi(const BMulti& in, double dist, int points_per_circle) {
  BMulti out;
  bg::strategy::buffer::distance_symmetric<double> distance_strategy(dist);
  bg::strategy::buffer::join_round join(points_per_circle);
  bg::strategy::buffer::end_round end(points_per_circle);
  bg::strategy::buffer::point_circle circle(points_per_circle);
  bg::strategy::buffer::side_straight side;
  bg::buffer(in, out, distance_strategy, side, join, end, circle);
  return out;
}

// Effective radius and segment count so that the polyline arcs circumscribe
// the rho-circle (edges at distance >= rho, vertices at rho + sagitta).
struct ArcParams {
  double radius;
  int segments;
};

ArcParams circumscribed_arc(double rho) {
  const double theta = 2.0 * std::acos(rho / (rho + kArcSagitta));
  const int n =
      std::max(kMinDiskSegments, static_cast<int>(std::ceil(2.0 * M_PI / theta)));
  return {rho / std::cos(M_PI / n), n};
}

}  // namespace

Polygon2 inflate(const Polygon2& poly, double rho) {
  if (rho < 0.0) throw InvalidGeometry("inflate requires rho >= 0");
  if (poly.empty()) throw InvalidGeometry("inflate of empty polygon");
  if (rho == 0.0) return poly;
  const ArcParams arc = circumscribed_arc(rho);
  BMulti in;
  in.push_back(to_bpoly(poly));
  const BMulti out = buffer_multi(in, arc.radius, arc.segments);
  std::vector<HoledPolygon> parts = from_bmulti(out);
  if (parts.empty()) throw InvalidGeometry("inflation produced no output");
  // Inflation of one polygon is one component; keep the outer ring (narrow
  // cavities that close over become filled, which stays an outer bound).
  std::size_t best = 0;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].outer.area() > parts[best].outer.area()) best = i;
  }
  return parts[best].outer;
}

Region erode_workspace(const Region& workspace, double rho) {
  if (rho < 0.0) throw InvalidGeometry("erode requires rho >= 0");
  if (workspace.is_full_plane()) return Region::full_plane();
  if (workspace.is_empty_set()) return Region::empty_set();
  if (rho == 0.0) return workspace;
  // Erode by the circumscribed radius: dilating the complement with
  // circumscribed arcs keeps the result inside the exact erosion.
  const ArcParams arc = circumscribed_arc(rho);
  BMulti in;
  in.push_back(to_bpoly(workspace.poly()));
  const BMulti out = buffer_multi(in, -arc.radius, arc.segments);
  std::vector<HoledPolygon> parts = from_bmulti(out);
  if (parts.empty()) return Region::empty_set();
  std::size_t best = 0;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].area() > parts[best].area()) best = i;
  }
  return Region::polygon(parts[best].outer);
}

bool region_is_empty(const Region& r) { return r.is_empty_set(); }

}  // namespace nav2d::geom
