#include "nav2d/dsplanner/modulation.hpp"

#include <algorithm>
#include <cmath>

#include "nav2d/geometry/ops.hpp"

namespace nav2d::ds {

using geom::Point2;
using geom::Polygon2;

namespace {

constexpr double kGammaInfluence = 1e6;   // beyond this an obstacle is ignored
constexpr double kPenetrationTol = 1e-6;  // meters of tolerated boundary breach

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

std::size_t ModulationField::StarGeometry::sector(const Point2& r) const {
  const double phi = std::atan2(r.y - ref.y, r.x - ref.x);
  // angles[] ascends over one wrap; shift the query into range.
  double q = phi;
  if (q < angles.front()) q += 2.0 * M_PI;
  const auto it = std::upper_bound(angles.begin(), angles.end(), q);
  const std::size_t idx = (it == angles.begin()) ? angles.size() - 1 : (it - angles.begin() - 1);
  return idx % angles.size();
}

double ModulationField::StarGeometry::boundary_radius(const Point2& r) const {
  const Point2 u = (r - ref).normalized();
  if (!monotone) {
    // Non-starshaped fallback geometry: use the farthest boundary crossing.
    double best = 0.0;
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = verts[i];
      const Point2& b = verts[(i + 1) % n];
      const Point2 d = b - a;
      const double denom = u.cross(d);
      if (std::abs(denom) < 1e-15) continue;
      const Point2 w = a - ref;
      const double t = w.cross(d) / denom;
      const double sseg = w.cross(u) / denom;
      if (t > 0.0 && sseg >= -1e-12 && sseg <= 1.0 + 1e-12) best = std::max(best, t);
    }
    return best > 0.0 ? best : std::numeric_limits<double>::infinity();
  }
  const std::size_t k = sector(r);
  const double denom = normals[k].dot(u);
  if (denom <= 1e-12) return std::numeric_limits<double>::infinity();
  return offsets[k] / denom;
}

ModulationField::StarGeometry ModulationField::build_geometry(const Polygon2& poly,
                                                              const Point2& ref_hint) {
  StarGeometry g;
  g.ref = ref_hint;

  // The reference point must lie strictly inside the kernel; nudge toward the
  // kernel centroid until the sector offsets are safely positive.
  auto min_offset = [&](const Point2& c) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const geom::Segment e = poly.edge(i);
      const Point2 n = Point2{(e.b - e.a).y, -(e.b - e.a).x}.normalized();
      m = std::min(m, n.dot(e.a - c));
    }
    return m;
  };
  if (min_offset(g.ref) < 1e-9) {
    const auto kernel = geom::polygon_kernel(poly);
    const Point2 target = kernel ? kernel->centroid() : poly.centroid();
    for (int i = 0; i < 8 && min_offset(g.ref) < 1e-9; ++i) {
      g.ref = g.ref + (target - g.ref) * 0.5;
    }
  }

  const std::size_t n = poly.size();
  std::vector<double> raw_angles(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 d = poly.vertex(i) - g.ref;
    raw_angles[i] = std::atan2(d.y, d.x);
  }
  // Rotate so the angle sequence ascends (CCW polygon seen from an interior
  // kernel point has strictly increasing vertex angles modulo one wrap).
  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (raw_angles[i] < raw_angles[start]) start = i;
  }
  g.angles.resize(n);
  g.normals.resize(n);
  g.offsets.resize(n);
  g.verts.resize(n);
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = (start + i) % n;
    double a = raw_angles[src];
    if (a < prev) {
      a += 2.0 * M_PI;  // single wrap
      if (a < prev) g.monotone = false;
    }
    prev = a;
    g.angles[i] = a;
    const geom::Segment e = poly.edge(src);
    const Point2 dir = e.b - e.a;
    const Point2 nrm = Point2{dir.y, -dir.x}.normalized();  // outward for CCW
    g.normals[i] = nrm;
    g.offsets[i] = nrm.dot(e.a - g.ref);
    g.verts[i] = e.a;
  }
  return g;
}

ModulationField::ModulationField(const star::StarWorld& world, const Point2& goal)
    : goal_(goal) {
  obstacles_.reserve(world.obstacles.size());
  for (const star::StarObstacle& o : world.obstacles) {
    obstacles_.push_back(build_geometry(o.polygon, o.reference_point));
  }
  if (world.workspace_rho.is_polygon()) {
    const Polygon2& w = world.workspace_rho.poly();
    const auto center = geom::strict_star_center(w);
    workspace_ = build_geometry(w, center ? *center : w.centroid());
  }
}

double ModulationField::gamma(std::size_t i, const Point2& r) const {
  const StarGeometry& g = obstacles_[i];
  const double rad = (r - g.ref).norm();
  if (rad < 1e-12) return 0.0;  // at the reference point: deep inside
  const double rb = g.boundary_radius(r);
  return rad / rb;
}

std::optional<double> ModulationField::workspace_gamma(const Point2& r) const {
  if (!workspace_) return std::nullopt;
  const double rad = (r - workspace_->ref).norm();
  if (rad < 1e-12) return std::numeric_limits<double>::infinity();
  const double rb = workspace_->boundary_radius(r);
  return rb / rad;  // inverted: >= 1 inside the workspace
}

Point2 ModulationField::project_outside(std::size_t i, const Point2& r, double margin) const {
  const StarGeometry& g = obstacles_[i];
  const Point2 d = r - g.ref;
  const double rad = d.norm();
  const double rb = g.boundary_radius(r);
  if (rad < 1e-12) return g.ref + Point2{rb + margin, 0.0};
  return g.ref + d * ((rb + margin) / rad);
}

Point2 ModulationField::project_into_workspace(const Point2& r, double margin) const {
  const StarGeometry& g = *workspace_;
  const Point2 d = r - g.ref;
  const double rad = d.norm();
  const double rb = g.boundary_radius(r);
  if (rad < 1e-12) return r;
  return g.ref + d * ((rb - margin) / rad);
}

Point2 ModulationField::eval(const Point2& r) const { return eval_impl(r, false); }

Point2 ModulationField::eval_clamped(const Point2& r) const { return eval_impl(r, true); }

Point2 ModulationField::eval_impl(const Point2& r, bool clamp) const {
  const Point2 f = goal_ - r;
  if (f.norm() < 1e-15) return {0.0, 0.0};

  struct Contribution {
    double weight_factor;  // Gamma - 1
    Point2 velocity;
  };
  std::vector<Contribution> parts;
  parts.reserve(obstacles_.size() + 1);

  auto modulated = [&](const Point2& ref, double gamma_val, const Point2& tangent) -> Point2 {
    // M = E diag(1 - 1/G, 1 + 1/G) E^{-1}, E = [radial, tangent].
    const Point2 er = (r - ref).normalized();
    const double det = er.cross(tangent);
    if (std::abs(det) < 1e-12) return f;  // degenerate basis: no modulation
    const double lr = 1.0 - 1.0 / gamma_val;
    const double lt = 1.0 + 1.0 / gamma_val;
    // Coordinates of f in basis (er, tangent).
    const double a = (f.cross(tangent)) / det;       // radial coordinate
    const double b = (er.cross(f)) / det;            // tangent coordinate
    return er * (lr * a) + tangent * (lt * b);
  };

  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    const StarGeometry& g = obstacles_[i];
    const double rad = (r - g.ref).norm();
    const double rb = g.boundary_radius(r);
    double gm = (rad < 1e-12) ? 0.0 : rad / rb;
    if (!clamp && gm < 1.0 - kPenetrationTol / std::max(rb, 1e-9)) {
      throw OutsideFreeSpace("position inside star obstacle");
    }
    gm = std::max(gm, 1.0);
    if (gm > kGammaInfluence) continue;
    const std::size_t k = g.sector(r);
    const Point2 tangent = g.normals[k].perp() * -1.0;  // along the edge, CCW
    parts.push_back({gm - 1.0, modulated(g.ref, gm, tangent)});
  }
  if (workspace_) {
    const StarGeometry& g = *workspace_;
    const double rad = (r - g.ref).norm();
    if (rad > 1e-12) {
      const double rb = g.boundary_radius(r);
      double gm = rb / rad;
      if (!clamp && gm < 1.0 - kPenetrationTol / std::max(rad, 1e-9)) {
        throw OutsideFreeSpace("position outside workspace");
      }
      gm = std::max(gm, 1.0);
      if (gm <= kGammaInfluence) {
        const std::size_t k = g.sector(r);
        const Point2 tangent = g.normals[k].perp() * -1.0;
        parts.push_back({gm - 1.0, modulated(g.ref, gm, tangent)});
      }
    }
  }

  if (parts.empty()) return f;

  // Gamma-proximity weights: w_i proportional to prod_{j != i} (Gamma_j - 1).
  std::vector<double> weights(parts.size(), 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (j != i) weights[i] *= parts[j].weight_factor;
    }
    weights[i] = std::max(weights[i], 0.0);
    sum += weights[i];
  }
  if (sum <= 1e-300) {
    // On (or numerically at) several boundaries at once: average evenly.
    for (double& w : weights) w = 1.0 / parts.size();
  } else {
    for (double& w : weights) w /= sum;
  }

  // Blend magnitude and direction (relative to the nominal dynamics f), which
  // avoids spurious cancellation between obstacle contributions.
  const double f_ang = std::atan2(f.y, f.x);
  double mag = 0.0;
  double ang = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Point2& v = parts[i].velocity;
    const double m = v.norm();
    mag += weights[i] * m;
    if (m > 1e-12) {
      ang += weights[i] * wrap_angle(std::atan2(v.y, v.x) - f_ang);
    }
  }
  return Point2{std::cos(f_ang + ang), std::sin(f_ang + ang)} * mag;
}

Point2 ModulationField::eval_normalized(const Point2& r) const {
  const Point2 v = eval(r);
  const double n = v.norm();
  if (n < 1e-12) return {0.0, 0.0};
  return v / n;
}

ModulationField ModulationField::with_references_off_segment(const Point2& r0) const {
  ModulationField out = *this;
  const geom::Segment seg{r0, goal_};
  const Point2 dir = (goal_ - r0).normalized();
  if (dir.norm() < 0.5) return out;
  const Point2 lateral = dir.perp();
  for (StarGeometry& g : out.obstacles_) {
    if (seg.distance_to(g.ref) < 1e-6) {
      const Point2 shifted = g.ref + lateral * 1e-6;
      // Rebuild with the shifted reference so the sector table matches.
      g = build_geometry(Polygon2::unchecked(g.verts), shifted);
    }
  }
  return out;
}

}  // namespace nav2d::ds
