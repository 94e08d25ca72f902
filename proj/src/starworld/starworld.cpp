#include "nav2d/starworld/starworld.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nav2d::star {

using geom::BoolOp;
using geom::Point2;
using geom::PolyList;
using geom::Polygon2;
using geom::PolygonSet;
using geom::Region;

namespace {

constexpr double kEmptyArea = 1e-12;

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::optional<Polygon2> kernel_intersection_of(const PolyList& obstacles,
                                               const std::vector<std::size_t>& members,
                                               bool* all_starshaped) {
  *all_starshaped = true;
  std::optional<PolygonSet> acc;
  for (std::size_t idx : members) {
    const auto k = geom::polygon_kernel(obstacles[idx]);
    if (!k) {
      *all_starshaped = false;
      return std::nullopt;
    }
    if (!acc) {
      acc = PolygonSet(*k);
    } else {
      acc = geom::boolean_op(*acc, PolygonSet(*k), BoolOp::Intersection);
    }
    if (acc->area() <= kEmptyArea) return std::nullopt;
  }
  if (!acc || acc->empty()) return std::nullopt;
  // Intersection of convex sets is convex and connected: one hole-free part.
  return acc->parts().front().outer;
}

Cluster make_cluster(const PolyList& obstacles, std::vector<std::size_t> members) {
  Cluster cl;
  std::sort(members.begin(), members.end());
  cl.member_indices = std::move(members);
  PolyList polys;
  polys.reserve(cl.member_indices.size());
  for (std::size_t idx : cl.member_indices) polys.push_back(obstacles[idx]);
  cl.union_region = geom::union_all(polys).outer_polygons();
  cl.kernel_intersection =
      kernel_intersection_of(obstacles, cl.member_indices, &cl.all_starshaped);
  return cl;
}

bool cluster_inside_workspace(const Cluster& cl, const Region& workspace) {
  if (workspace.is_full_plane()) return true;
  if (workspace.is_empty_set()) return false;
  return geom::covered_by(PolygonSet(cl.union_region), PolygonSet(workspace.poly()));
}

// Candidate picking inside an admissible region, preferring proximity to
// prev_centroid and avoiding the exclude points.
std::vector<Point2> pick_points(const PolygonSet& region, const std::vector<Point2>& exclude,
                                const std::optional<Point2>& prev_centroid, int count) {
  std::vector<Point2> candidates;
  if (prev_centroid) candidates.push_back(region.closest_point(*prev_centroid));
  const Point2 c = region.centroid();
  candidates.push_back(region.contains(c) ? c : region.closest_point(c));
  for (const auto& part : region.parts()) {
    const Point2 pc = part.outer.centroid();
    candidates.push_back(region.contains(pc) ? pc : region.closest_point(pc));
    for (const Point2& v : part.outer.vertices()) {
      candidates.push_back(v + (pc - v) * 0.25);
    }
  }
  auto excluded = [&](const Point2& q) {
    return std::any_of(exclude.begin(), exclude.end(),
                       [&](const Point2& e) { return geom::distance(e, q) < 1e-6; });
  };
  std::vector<Point2> out;
  for (const Point2& q : candidates) {
    if (!region.contains(q, geom::kGeomTol) || excluded(q)) continue;
    bool dup = false;
    for (const Point2& o : out) dup |= geom::distance(o, q) < 1e-9;
    if (dup) continue;
    out.push_back(q);
    if (static_cast<int>(out.size()) == count) break;
  }
  return out;
}

}  // namespace

std::vector<Cluster> cluster_obstacles(const PolyList& obstacles) {
  const std::size_t n = obstacles.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (geom::intersects(obstacles[i], obstacles[j])) uf.unite(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
  std::vector<Cluster> clusters;
  for (auto& g : groups) {
    if (!g.empty()) clusters.push_back(make_cluster(obstacles, std::move(g)));
  }
  // Deterministic order: by smallest member index.
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    return a.member_indices.front() < b.member_indices.front();
  });
  return clusters;
}

DswEquivalence is_dsw_equivalent(const Environment& env) {
  DswEquivalence res;
  res.clusters = cluster_obstacles(env.obstacles);
  for (const Cluster& cl : res.clusters) {
    if (!cl.all_starshaped) {
      res.diagnostic = "cluster contains a non-starshaped obstacle";
      return res;
    }
    if (!cl.kernel_intersection) {
      res.diagnostic = "cluster kernels do not intersect";
      return res;
    }
    if (!cluster_inside_workspace(cl, env.workspace) && env.workspace.is_polygon()) {
      // ker_cap(cl) must not fall entirely within the workspace.
      if (geom::covered_by(PolygonSet(*cl.kernel_intersection),
                           PolygonSet(env.workspace.poly()))) {
        res.diagnostic = "straddling cluster has no kernel mass outside the workspace";
        return res;
      }
    }
  }
  res.equivalent = true;
  return res;
}

std::vector<Point2> select_kernel_points(const Cluster& cluster,
                                         const std::vector<Point2>& exclude,
                                         const std::optional<Point2>& prev_centroid,
                                         const Region& workspace, int count) {
  PolygonSet s(cluster.union_region);
  if (s.empty()) throw KernelSelectionFailed("cluster union is empty");

  // Straddling clusters restrict candidates to the workspace exterior.
  if (!cluster_inside_workspace(cluster, workspace) && workspace.is_polygon()) {
    const PolygonSet outside =
        geom::boolean_op(s, PolygonSet(workspace.poly()), BoolOp::Difference);
    if (outside.area() > kEmptyArea) s = outside;
  }
  // Restrict to the intersecting kernel region when available.
  if (cluster.all_starshaped && cluster.kernel_intersection) {
    const PolygonSet in_kernel =
        geom::boolean_op(s, PolygonSet(*cluster.kernel_intersection), BoolOp::Intersection);
    if (in_kernel.area() > kEmptyArea) {
      s = in_kernel;
    }
  }
  // (Otherwise s is already contained in the cluster union.)

  std::vector<Point2> points = pick_points(s, exclude, prev_centroid, count);
  if (points.empty()) throw KernelSelectionFailed("no admissible kernel point");
  return points;
}

Polygon2 starshaped_hull_with_kernel(const PolyList& cluster_union,
                                     const std::vector<Point2>& kernel_points, int max_rounds) {
  if (kernel_points.empty()) throw HullFailed("kernel point set is empty");
  if (cluster_union.empty()) throw HullFailed("cluster union is empty");

  // Fixpoint shortcut: a single kernel point inside the kernel of a single
  // polygon leaves the polygon untouched.
  if (cluster_union.size() == 1) {
    const auto kernel = geom::polygon_kernel(cluster_union.front());
    if (kernel && std::all_of(kernel_points.begin(), kernel_points.end(), [&](const Point2& k) {
          return kernel->contains(k, geom::kGeomTol);
        })) {
      return cluster_union.front();
    }
  }

  PolyList current = cluster_union;
  double prev_area = PolygonSet(current).area();
  for (int round = 0; round < max_rounds; ++round) {
    // cone(k, P) = P united with the triangles spanned by k and each edge.
    PolyList pieces = current;
    for (const Point2& k : kernel_points) {
      for (const Polygon2& poly : current) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
          const geom::Segment e = poly.edge(i);
          const double doubled = (e.a - k).cross(e.b - k);
          if (std::abs(doubled) < 1e-14) continue;
          std::vector<Point2> tri{k, e.a, e.b};
          pieces.push_back(Polygon2(std::move(tri), Polygon2::Validate::OrientOnly));
        }
      }
    }
    const PolygonSet merged = geom::union_all(pieces);
    if (merged.parts().size() != 1) throw HullFailed("hull is not connected");
    current = PolyList{merged.parts().front().outer};
    const double area = current.front().area();
    if (area <= prev_area + 1e-12) break;  // cone fixpoint reached
    prev_area = area;
  }

  const Polygon2& hull = current.front();
  const auto kernel = geom::polygon_kernel(hull);
  for (const Point2& k : kernel_points) {
    if (!kernel || !kernel->contains(k, 1e-6)) {
      throw HullFailed("kernel property not satisfied after cone iteration");
    }
  }
  return hull;
}

bool is_dsw(const StarWorld& sw) {
  const std::size_t n = sw.obstacles.size();
  for (std::size_t i = 0; i < n; ++i) {
    const StarObstacle& o = sw.obstacles[i];
    bool star = false;
    for (const Point2& k : o.kernel_points) {
      star |= geom::is_strictly_starshaped_wrt(o.polygon, k);
    }
    if (!star && !geom::is_strictly_starshaped(o.polygon)) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (geom::intersects(o.polygon, sw.obstacles[j].polygon)) return false;
    }
    if (sw.workspace_rho.is_polygon() &&
        !geom::covered_by(o.polygon, sw.workspace_rho.poly())) {
      const bool exterior_kernel_point =
          std::any_of(o.kernel_points.begin(), o.kernel_points.end(), [&](const Point2& k) {
            return !sw.workspace_rho.poly().contains(k, geom::kGeomTol);
          });
      if (!exterior_kernel_point) return false;
    }
  }
  return true;
}

ModEnvOutcome mod_env_star(const Region& workspace_rho, const PolyList& obstacles_rho,
                           double rho, const Point2& r0, const Point2& rg,
                           const StarWorld* prev, const EnvModParams& params) {
  ModEnvOutcome out;
  out.world.workspace_rho = workspace_rho;
  out.world.rho = rho;

  const std::vector<Point2> exclude{r0, rg};
  std::vector<StarObstacle> current;
  current.reserve(obstacles_rho.size());
  for (const Polygon2& o : obstacles_rho) {
    current.push_back(StarObstacle{o, {}, o.centroid()});
  }

  auto prev_centroid_for = [&](const Cluster& cl,
                               const PolyList& polys) -> std::optional<Point2> {
    if (!prev) return std::nullopt;
    for (const StarObstacle& po : prev->obstacles) {
      if (po.kernel_points.empty()) continue;
      for (std::size_t idx : cl.member_indices) {
        if (geom::intersects(po.polygon, polys[idx])) return po.kernel_points.front();
      }
    }
    return std::nullopt;
  };

  for (out.iterations = 1; out.iterations <= params.max_iterations; ++out.iterations) {
    PolyList polys;
    polys.reserve(current.size());
    for (const StarObstacle& o : current) polys.push_back(o.polygon);
    const std::vector<Cluster> clusters = cluster_obstacles(polys);

    std::vector<StarObstacle> next;
    next.reserve(clusters.size());
    bool changed = false;

    for (const Cluster& cl : clusters) {
      std::vector<Point2> kernel_points;
      try {
        kernel_points = select_kernel_points(cl, exclude, prev_centroid_for(cl, polys),
                                             workspace_rho, params.kernel_points_per_cluster);
      } catch (const KernelSelectionFailed&) {
        // Keep the members untouched; the result will not be a DSW.
        for (std::size_t idx : cl.member_indices) next.push_back(current[idx]);
        continue;
      }

      // A singleton whose polygon is already strictly starshaped w.r.t. the
      // selected point is kept bit-identical (fixpoint).
      if (cl.member_indices.size() == 1) {
        const StarObstacle& old = current[cl.member_indices.front()];
        if (geom::is_strictly_starshaped_wrt(old.polygon, kernel_points.front()) &&
            old.polygon.contains(kernel_points.front(), geom::kGeomTol)) {
          const auto kernel = geom::polygon_kernel(old.polygon);
          if (kernel && kernel->contains(kernel_points.front(), 1e-9)) {
            next.push_back(StarObstacle{old.polygon, kernel_points, kernel_points.front()});
            continue;
          }
        }
      }

      try {
        Polygon2 hull =
            starshaped_hull_with_kernel(cl.union_region, kernel_points, params.hull_rounds);
        // The hull must not swallow the reference endpoints; keep the raw
        // members if it does.
        if (hull.strictly_contains(r0, 1e-9) || hull.strictly_contains(rg, 1e-9)) {
          for (std::size_t idx : cl.member_indices) next.push_back(current[idx]);
          continue;
        }
        // A merge or a grown singleton can introduce new intersections.
        const double union_area = PolygonSet(cl.union_region).area();
        changed |= cl.member_indices.size() > 1 || hull.area() > union_area + 1e-12;
        next.push_back(StarObstacle{std::move(hull), kernel_points, kernel_points.front()});
      } catch (const HullFailed&) {
        for (std::size_t idx : cl.member_indices) next.push_back(current[idx]);
      }
    }

    current = std::move(next);
    if (!changed) {
      out.world.obstacles = current;
      out.reached_dsw = is_dsw(out.world);
      return out;
    }
  }

  out.world.obstacles = current;
  out.reached_dsw = is_dsw(out.world);
  return out;
}

bool free_set_subset(const Region& w1, const PolyList& o1, const Region& w2, const PolyList& o2,
                     double tol) {
  if (w1.is_empty_set()) return true;
  if (w1.is_full_plane() && !w2.is_full_plane()) return false;

  if (w1.is_full_plane()) {
    // F1 subset of F2 iff O2 union covers O1 complement... i.e. O2 <= O1.
    const PolygonSet extra = geom::boolean_op(geom::union_all(o2), geom::union_all(o1),
                                              BoolOp::Difference);
    return extra.area() <= tol * std::max(1.0, PolygonSet(o2).area());
  }
  if (w2.is_empty_set()) {
    const PolygonSet f1 =
        geom::boolean_op(PolygonSet(w1.poly()), geom::union_all(o1), BoolOp::Difference);
    return f1.area() <= tol;
  }
  PolygonSet f1 =
      geom::boolean_op(PolygonSet(w1.poly()), geom::union_all(o1), BoolOp::Difference);
  if (f1.empty()) return true;
  if (w2.is_polygon()) {
    const PolygonSet outside =
        geom::boolean_op(f1, PolygonSet(w2.poly()), BoolOp::Difference);
    if (outside.area() > tol * std::max(1.0, f1.area())) return false;
  }
  const PolygonSet overlap = geom::boolean_op(f1, geom::union_all(o2), BoolOp::Intersection);
  return overlap.area() <= tol * std::max(1.0, f1.area());
}

EnvModResult environment_modification(const Environment& env, const Point2& p, const Point2& pg,
                                      const Point2& r_plus, const StarWorld* cached,
                                      const EnvModParams& params) {
  if (geom::signed_free_clearance(p, env.workspace, env.obstacles) < -geom::kGeomTol) {
    throw RobotInCollision("robot position is not in the free set");
  }

  EnvModResult res;
  res.workspace_rho_bar = geom::erode_workspace(env.workspace, params.rho_bar);

  // Clearance selection via the equivalence p in C^rho <=> P0 nonempty.
  auto initial_reference_set = [&](double rho, const Region& w_rho,
                                   const PolyList& o_rho) -> PolygonSet {
    const Polygon2 ball = geom::polygonize_disk(p, rho, geom::ArcFit::Inner);
    PolygonSet p0 = w_rho.is_polygon()
                        ? geom::boolean_op(PolygonSet(ball), PolygonSet(w_rho.poly()),
                                           BoolOp::Intersection)
                        : PolygonSet(ball);
    if (w_rho.is_empty_set()) return {};
    if (!o_rho.empty()) p0 = geom::boolean_op(p0, geom::union_all(o_rho), BoolOp::Difference);
    return p0;
  };

  PolyList obstacles_rho_bar;
  obstacles_rho_bar.reserve(env.obstacles.size());
  for (const Polygon2& o : env.obstacles) obstacles_rho_bar.push_back(geom::inflate(o, params.rho_bar));

  double rho = params.rho_bar;
  Region w_rho = res.workspace_rho_bar;
  PolyList obstacles_rho = obstacles_rho_bar;
  PolygonSet p0 = initial_reference_set(rho, w_rho, obstacles_rho);
  if (p0.area() <= kEmptyArea) {
    // p is outside C^rho_bar: shrink the clearance.
    rho = params.alpha * geom::signed_clearance(p, env.workspace, env.obstacles);
    w_rho = geom::erode_workspace(env.workspace, rho);
    obstacles_rho.clear();
    for (const Polygon2& o : env.obstacles) obstacles_rho.push_back(geom::inflate(o, rho));
    p0 = initial_reference_set(rho, w_rho, obstacles_rho);
  }
  res.rho = rho;

  res.r0 = (p0.area() <= kEmptyArea) ? p : p0.closest_point(r_plus);
  res.rg = geom::project_to_free_set(pg, w_rho, obstacles_rho);

  // Cache reuse (Alg. 1 lines 7-9).
  bool reused = false;
  if (cached != nullptr) {
    const PolyList cached_polys = cached->obstacle_polygons();
    if (geom::free_closure_contains(res.r0, cached->workspace_rho, cached_polys) &&
        geom::free_closure_contains(res.rg, cached->workspace_rho, cached_polys) &&
        free_set_subset(cached->workspace_rho, cached_polys, w_rho, obstacles_rho)) {
      res.star_world = *cached;
      res.star_world.workspace_rho = w_rho;
      res.star_world.rho = rho;
      reused = true;
    }
  }
  if (!reused) {
    ModEnvOutcome outcome =
        mod_env_star(w_rho, obstacles_rho, rho, res.r0, res.rg, cached, params);
    res.star_world = std::move(outcome.world);
  }
  res.reused_cached = reused;
  res.obstacles_before_convexification = res.star_world.obstacle_polygons();
  res.obstacles_rho = obstacles_rho;

  // Convexification (Alg. 1 lines 10-12): convexify each star obstacle whose
  // hull keeps r0, rg exterior and stays disjoint from the other obstacles.
  auto& obstacles = res.star_world.obstacles;
  for (std::size_t j = 0; j < obstacles.size(); ++j) {
    if (obstacles[j].polygon.is_convex()) continue;
    Polygon2 hull = geom::convex_hull(obstacles[j].polygon.vertices());
    if (hull.contains(res.r0, geom::kGeomTol) || hull.contains(res.rg, geom::kGeomTol)) continue;
    bool disjoint = true;
    for (std::size_t i = 0; i < obstacles.size() && disjoint; ++i) {
      if (i != j) disjoint = !geom::intersects(hull, obstacles[i].polygon);
    }
    if (disjoint) obstacles[j].polygon = std::move(hull);
  }

  res.is_dsw = is_dsw(res.star_world);
  return res;
}

}  // namespace nav2d::star
