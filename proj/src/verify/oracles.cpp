#include "nav2d/verify/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace nav2d::verify {

using geom::Point2;
using geom::Polygon2;

bool segment_visible(const Polygon2& poly, const Point2& x, const Point2& y) {
  const Point2 r = y - x;
  const double len = r.norm();
  if (len < 1e-12) return true;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const geom::Segment e = poly.edge(i);
    const Point2 s = e.b - e.a;
    const double denom = r.cross(s);
    if (std::abs(denom) < 1e-15) continue;
    const Point2 qp = e.a - x;
    const double t = qp.cross(s) / denom;
    const double u = qp.cross(r) / denom;
    // Proper crossing strictly inside both segments blocks visibility;
    // touching the target point itself or an edge endpoint does not.
    if (t > 1e-9 && t < 1.0 - 1e-9 && u > 1e-9 && u < 1.0 - 1e-9) return false;
  }
  return true;
}

GridKernelResult grid_kernel_iou(const Polygon2& poly,
                                 const std::optional<Polygon2>& impl_kernel, double grid_step,
                                 double boundary_step) {
  // Boundary samples: all vertices plus points every boundary_step meters.
  std::vector<Point2> targets;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const geom::Segment e = poly.edge(i);
    targets.push_back(e.a);
    const double len = e.length();
    const int k = std::max(1, static_cast<int>(std::floor(len / boundary_step)));
    for (int j = 1; j < k; ++j) targets.push_back(e.at(static_cast<double>(j) / k));
  }

  const geom::BoundingBox box = poly.bbox();
  GridKernelResult res;
  for (double gx = box.min.x + 0.5 * grid_step; gx < box.max.x; gx += grid_step) {
    for (double gy = box.min.y + 0.5 * grid_step; gy < box.max.y; gy += grid_step) {
      const Point2 p{gx, gy};
      if (!poly.contains(p, 0.0)) continue;
      bool oracle_in = true;
      for (const Point2& t : targets) {
        if (!segment_visible(poly, p, t)) {
          oracle_in = false;
          break;
        }
      }
      const bool impl_in = impl_kernel && impl_kernel->contains(p, geom::kGeomTol);
      res.kernel_cells += oracle_in ? 1 : 0;
      res.impl_cells += impl_in ? 1 : 0;
      res.both_cells += (oracle_in && impl_in) ? 1 : 0;
    }
  }
  const int uni = res.kernel_cells + res.impl_cells - res.both_cells;
  res.both_empty = (uni == 0);
  res.iou = res.both_empty ? 1.0 : static_cast<double>(res.both_cells) / uni;
  return res;
}

Polygon2 random_star_polygon(util::Rng& rng, const Point2& center, double r_min, double r_max,
                             int min_verts, int max_verts) {
  const int n = min_verts + rng.uniform_int(max_verts - min_verts + 1);
  // One jittered vertex per angular sector: strictly increasing angles that
  // wrap the full circle, so the radial polygon is simple by construction.
  std::vector<double> angles(n);
  for (int i = 0; i < n; ++i) {
    angles[i] = 2.0 * M_PI * (i + rng.uniform(0.05, 0.95)) / n;
  }
  std::vector<Point2> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double r = rng.uniform(r_min, r_max);
    v.push_back(center + Point2{r * std::cos(angles[i]), r * std::sin(angles[i])});
  }
  return Polygon2(std::move(v));
}

Polygon2 random_l_shape(util::Rng& rng, const Point2& center, double scale) {
  const double w = scale * rng.uniform(0.8, 1.2);
  const double h = scale * rng.uniform(0.8, 1.2);
  const double cx = rng.uniform(0.3, 0.7) * w;
  const double cy = rng.uniform(0.3, 0.7) * h;
  std::vector<Point2> v{{0, 0}, {w, 0}, {w, cy}, {cx, cy}, {cx, h}, {0, h}};
  const double ang = rng.uniform(0.0, 2.0 * M_PI);
  for (Point2& p : v) p = center + (p - Point2{w / 2, h / 2}).rotated(ang);
  return Polygon2(std::move(v));
}

Polygon2 comb_polygon(const Point2& origin, double scale) {
  // 3x2 rectangle with one notch from the bottom and one from the top; the
  // alternating slots leave no point seeing the whole polygon.
  std::vector<Point2> v{{0.0, 0.0}, {1.8, 0.0}, {1.8, 1.5}, {2.2, 1.5},
                        {2.2, 0.0}, {3.0, 0.0}, {3.0, 2.0}, {1.2, 2.0},
                        {1.2, 0.5}, {0.8, 0.5}, {0.8, 2.0}, {0.0, 2.0}};
  for (geom::Point2& p : v) p = origin + p * scale;
  return Polygon2(std::move(v));
}

Polygon2 random_simple_polygon(util::Rng& rng, const Point2& center, double scale) {
  const int pick = rng.uniform_int(4);
  switch (pick) {
    case 0:
      return random_l_shape(rng, center, scale);
    case 1:
      return comb_polygon(center - Point2{1.5, 1.0} * (scale / 2.0), scale / 2.0);
    default:
      return random_star_polygon(rng, center, 0.25 * scale, scale);
  }
}

}  // namespace nav2d::verify
