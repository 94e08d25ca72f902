#include "nav2d/verify/env_gen.hpp"

#include <cmath>

#include "nav2d/verify/oracles.hpp"

namespace nav2d::verify {

using geom::Point2;
using geom::Polygon2;

namespace {

// Kernel must contain the shared ball B[c, ball_r].
bool kernel_covers_ball(const Polygon2& poly, const Point2& c, double ball_r) {
  const auto kernel = geom::polygon_kernel(poly);
  if (!kernel) return false;
  if (!kernel->contains(c, 0.0)) return false;
  return kernel->boundary_distance(c) >= ball_r;
}

// One obstacle whose kernel covers B[c, ball_r]: convex blob, axis-aligned
// L-shape, or radial starshaped polygon.
Polygon2 random_member(util::Rng& rng, const Point2& c, double ball_r) {
  for (int attempt = 0; attempt < 40; ++attempt) {
    const int shape = rng.uniform_int(3);
    Polygon2 candidate;
    if (shape == 0) {
      std::vector<Point2> pts;
      const int n = 5 + rng.uniform_int(4);
      for (int i = 0; i < n; ++i) {
        const double a = 2.0 * M_PI * (i + rng.uniform(0.1, 0.9)) / n;
        const double r = rng.uniform(0.45, 1.2);
        pts.push_back(c + Point2{r * std::cos(a), r * std::sin(a)});
      }
      candidate = geom::convex_hull(pts);
    } else if (shape == 1) {
      const double w = rng.uniform(0.9, 1.8);
      const double h = rng.uniform(0.9, 1.8);
      const double cx = rng.uniform(0.45, 0.7) * w;
      const double cy = rng.uniform(0.45, 0.7) * h;
      // Kernel of the L is [0,cx]x[0,cy]; center that box on c.
      const Point2 org = c - Point2{cx / 2, cy / 2};
      candidate = Polygon2({org + Point2{0, 0}, org + Point2{w, 0}, org + Point2{w, cy},
                            org + Point2{cx, cy}, org + Point2{cx, h}, org + Point2{0, h}});
    } else {
      candidate = random_star_polygon(rng, c, 0.5, 1.3, 7, 12);
    }
    if (kernel_covers_ball(candidate, c, ball_r)) return candidate;
  }
  // Deterministic fallback: a square always qualifies.
  const double s = 0.8;
  return Polygon2({c + Point2{-s, -s}, c + Point2{s, -s}, c + Point2{s, s}, c + Point2{-s, s}});
}

}  // namespace

RandomScene random_dsw_equivalent_scene(util::Rng& rng, double rho_bar, bool with_workspace) {
  RandomScene scene;
  const double ws_radius = 7.0;
  if (with_workspace) {
    scene.env.workspace = geom::Region::disk({0, 0}, ws_radius, geom::ArcFit::Inner);
  }

  const int n_clusters = 1 + rng.uniform_int(3);
  std::vector<Point2> centers;
  // Max member extent from the cluster seed is ~1.7 m; keep inflated
  // clusters from merging.
  const double min_separation = 2.0 * 1.7 + 2.0 * rho_bar + 0.4;
  // Interior clusters must stay fully inside the eroded workspace even after
  // inflation (max member extent + rho_bar + erosion margin).
  const double interior_limit = ws_radius - 1.7 - 2.0 * rho_bar;
  for (int i = 0; i < n_clusters; ++i) {
    for (int attempt = 0; attempt < 60; ++attempt) {
      Point2 c{rng.uniform(-4.5, 4.5), rng.uniform(-4.5, 4.5)};
      const bool straddle = with_workspace && i == n_clusters - 1 && rng.bernoulli(0.4);
      if (straddle) {
        // Shared kernel ball outside the workspace, members poking inside.
        const double ang = rng.uniform(0.0, 2.0 * M_PI);
        c = Point2{(ws_radius + 0.25) * std::cos(ang), (ws_radius + 0.25) * std::sin(ang)};
      } else if (with_workspace && c.norm() > interior_limit) {
        continue;
      }
      bool ok = true;
      for (const Point2& o : centers) ok &= geom::distance(o, c) >= min_separation;
      if (ok) {
        centers.push_back(c);
        break;
      }
    }
  }

  const double ball_r = 0.18;
  for (const Point2& c : centers) {
    const int members = 1 + rng.uniform_int(3);
    for (int m = 0; m < members; ++m) {
      scene.env.obstacles.push_back(random_member(rng, c, ball_r));
    }
  }

  // Robot and goal: free points with clearance comfortably above rho_bar.
  auto sample_free = [&](double min_clearance) -> Point2 {
    const double span = with_workspace ? ws_radius - 0.6 : 6.0;
    for (int attempt = 0; attempt < 400; ++attempt) {
      const Point2 q{rng.uniform(-span, span), rng.uniform(-span, span)};
      if (!scene.env.workspace.contains(q)) continue;
      if (geom::signed_free_clearance(q, scene.env.workspace, scene.env.obstacles) >=
          min_clearance) {
        return q;
      }
    }
    // Deterministic fallback: best grid point by clearance.
    Point2 best{0.0, 0.0};
    double best_clear = -1e300;
    for (double gx = -span; gx <= span; gx += 0.25) {
      for (double gy = -span; gy <= span; gy += 0.25) {
        const Point2 q{gx, gy};
        if (!scene.env.workspace.contains(q)) continue;
        const double cl =
            geom::signed_free_clearance(q, scene.env.workspace, scene.env.obstacles);
        if (cl > best_clear) {
          best_clear = cl;
          best = q;
        }
      }
    }
    return best;
  };
  scene.robot = sample_free(1.6 * rho_bar);
  scene.goal = sample_free(1.6 * rho_bar);
  return scene;
}

}  // namespace nav2d::verify
