#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nav2d/starworld/starworld.hpp"
#include "nav2d/util/parallel.hpp"
#include "nav2d/util/rng.hpp"
#include "nav2d/verify/env_gen.hpp"

using namespace nav2d;
using geom::ArcFit;
using geom::Point2;
using geom::PolyList;
using geom::Polygon2;
using geom::PolygonSet;
using geom::Region;
using star::Cluster;
using star::Environment;
using star::StarWorld;

namespace {

Polygon2 square(double x0, double y0, double side) {
  return Polygon2({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

Polygon2 disk(const Point2& c, double r) { return geom::polygonize_disk(c, r, ArcFit::Outer); }

double union_area(const PolyList& polys) { return PolygonSet(polys).area(); }

double sym_diff_area(const PolyList& a, const PolyList& b) {
  const double uni = geom::boolean_op(a, b, geom::BoolOp::Union).area();
  const double inter = geom::boolean_op(a, b, geom::BoolOp::Intersection).area();
  return uni - inter;
}

}  // namespace

TEST_CASE("cluster_obstacles") {
  SUBCASE("three disjoint squares give three singletons") {
    const PolyList obs{square(0, 0, 1), square(3, 0, 1), square(6, 0, 1)};
    const auto clusters = star::cluster_obstacles(obs);
    CHECK(clusters.size() == 3);
    for (const Cluster& c : clusters) CHECK(c.member_indices.size() == 1);
  }
  SUBCASE("transitive overlap forms one cluster") {
    // A and B overlap, B and C overlap, A and C do not.
    const PolyList obs{disk({0, 0}, 1.0), disk({1.5, 0}, 1.0), disk({3.0, 0}, 1.0)};
    CHECK_FALSE(geom::intersects(obs[0], obs[2]));
    const auto clusters = star::cluster_obstacles(obs);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].member_indices == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("chain of five overlapping disks") {
    PolyList obs;
    for (int i = 0; i < 5; ++i) obs.push_back(disk({0.9 * i, 0}, 0.6));
    const auto clusters = star::cluster_obstacles(obs);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].member_indices.size() == 5);
  }
}

TEST_CASE("is_dsw_equivalent") {
  SUBCASE("disjoint starshaped obstacles inside full plane") {
    Environment env;
    env.obstacles = {square(0, 0, 1), square(4, 4, 1)};
    CHECK(star::is_dsw_equivalent(env).equivalent);
  }
  SUBCASE("two overlapping disks: kernel intersection is the lens") {
    Environment env;
    env.obstacles = {disk({0, 0}, 1.0), disk({1.2, 0}, 1.0)};
    const auto res = star::is_dsw_equivalent(env);
    CHECK(res.equivalent);
    REQUIRE(res.clusters.size() == 1);
    REQUIRE(res.clusters[0].kernel_intersection.has_value());
    // The lens contains the midpoint and not the disk centers' far sides.
    CHECK(res.clusters[0].kernel_intersection->contains({0.6, 0}));
    CHECK_FALSE(res.clusters[0].kernel_intersection->contains({-0.5, 0}, 1e-9));
  }
  SUBCASE("overlapping L-shapes with disjoint kernels are not equivalent") {
    // Kernels are [0,1]^2 boxes at far corners; the shapes overlap only via
    // their long arms.
    const Polygon2 l1({{0, 0}, {5, 0}, {5, 1}, {1, 1}, {1, 5}, {0, 5}});
    const Polygon2 l2({{4.2, 4.2}, {4.2, -0.8}, {3.2, -0.8}, {3.2, 3.2}, {-0.8, 3.2},
                       {-0.8, 4.2}});
    Environment env;
    env.obstacles = {l1, l2};
    REQUIRE(geom::intersects(l1, l2));
    const auto res = star::is_dsw_equivalent(env);
    CHECK_FALSE(res.equivalent);
  }
}

TEST_CASE("select_kernel_points") {
  SUBCASE("singleton convex obstacle inside workspace picks the centroid") {
    const PolyList obs{square(1, 1, 2)};
    const auto clusters = star::cluster_obstacles(obs);
    const auto pts = star::select_kernel_points(clusters[0], {}, std::nullopt,
                                                Region::full_plane());
    REQUIRE(pts.size() == 1);
    CHECK(geom::distance(pts[0], Point2{2, 2}) < 1e-9);
  }
  SUBCASE("two overlapping disks select inside the lens") {
    const PolyList obs{disk({0, 0}, 1.0), disk({1.2, 0}, 1.0)};
    const auto clusters = star::cluster_obstacles(obs);
    REQUIRE(clusters.size() == 1);
    const auto pts = star::select_kernel_points(clusters[0], {}, std::nullopt,
                                                Region::full_plane());
    REQUIRE(pts.size() == 1);
    REQUIRE(clusters[0].kernel_intersection.has_value());
    CHECK(clusters[0].kernel_intersection->contains(pts[0], 1e-9));
  }
  SUBCASE("straddling obstacle selects outside the workspace") {
    const Region ws = Region::polygon(square(-5, -5, 10));
    // Obstacle pokes through the right wall; kernel mass on both sides.
    const PolyList obs{square(4, -1, 2)};
    const auto clusters = star::cluster_obstacles(obs);
    const auto pts = star::select_kernel_points(clusters[0], {}, std::nullopt, ws);
    REQUIRE(pts.size() == 1);
    CHECK_FALSE(ws.poly().contains(pts[0], 1e-9));
  }
}

TEST_CASE("starshaped_hull_with_kernel") {
  SUBCASE("apex outside a convex set gives conv(A + apex)") {
    const Polygon2 a = square(0, 0, 2);
    const Point2 k{3, 1};
    const Polygon2 hull = star::starshaped_hull_with_kernel({a}, {k});
    const Polygon2 expect = geom::convex_hull({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {3, 1}});
    CHECK(sym_diff_area({hull}, {expect}) < 1e-9);
    // Point-sampling check: segments from the apex stay in the hull.
    for (const Point2& v : a.vertices()) {
      for (double t = 0.0; t <= 1.0; t += 0.1) {
        CHECK(hull.contains(k + (v - k) * t, 1e-7));
      }
    }
  }
  SUBCASE("kernel point inside the kernel leaves the polygon unchanged") {
    const Polygon2 l({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    const Polygon2 hull = star::starshaped_hull_with_kernel({l}, {{0.5, 0.5}});
    CHECK(hull.vertices() == l.vertices());
  }
  SUBCASE("two overlapping disks from a lens point reproduce the union") {
    const PolyList obs{disk({0, 0}, 1.0), disk({1.2, 0}, 1.0)};
    const PolyList uni = PolygonSet(obs).outer_polygons();
    const Polygon2 hull = star::starshaped_hull_with_kernel(uni, {{0.6, 0.0}});
    CHECK(sym_diff_area({hull}, uni) <= 1e-3 * union_area(uni));
  }
}

TEST_CASE("mod_env_star") {
  SUBCASE("a DSW input is a fixpoint with identical polygons") {
    const PolyList obs{square(0, 0, 1), square(4, 0, 1)};
    const auto out = star::mod_env_star(Region::full_plane(), obs, 0.2, {-2, -2}, {8, 8},
                                        nullptr);
    CHECK(out.reached_dsw);
    REQUIRE(out.world.obstacles.size() == 2);
    CHECK(out.world.obstacles[0].polygon.vertices() == obs[0].vertices());
    CHECK(out.world.obstacles[1].polygon.vertices() == obs[1].vertices());
  }
  SUBCASE("two overlapping disks become one starshaped obstacle") {
    const PolyList obs{disk({0, 0}, 1.0), disk({1.2, 0}, 1.0)};
    const auto out = star::mod_env_star(Region::full_plane(), obs, 0.2, {-3, -3}, {5, 5},
                                        nullptr);
    CHECK(out.reached_dsw);
    REQUIRE(out.world.obstacles.size() == 1);
    CHECK(sym_diff_area({out.world.obstacles[0].polygon}, obs) <= 1e-3 * union_area(obs));
    CHECK(star::is_dsw(out.world));
  }
}

TEST_CASE("is_dsw rejects touching obstacles and trapped kernels") {
  StarWorld sw;
  sw.workspace_rho = Region::full_plane();
  sw.obstacles.push_back({square(0, 0, 1), {Point2{0.5, 0.5}}, Point2{0.5, 0.5}});
  sw.obstacles.push_back({square(1, 0, 1), {Point2{1.5, 0.5}}, Point2{1.5, 0.5}});  // touches
  CHECK_FALSE(star::is_dsw(sw));

  StarWorld sw2;
  sw2.workspace_rho = Region::polygon(square(-5, -5, 10));
  // Straddles the right wall but all kernel points are interior.
  sw2.obstacles.push_back({square(4, -1, 2), {Point2{4.5, 0.0}}, Point2{4.5, 0.0}});
  CHECK_FALSE(star::is_dsw(sw2));
  // With a kernel point outside the wall it qualifies.
  sw2.obstacles[0].kernel_points = {Point2{5.5, 0.0}};
  CHECK(star::is_dsw(sw2));
}

TEST_CASE("environment_modification basics") {
  star::EnvModParams params;

  SUBCASE("deep free space: rho = rho_bar, r0 near r_plus, rg = pg") {
    Environment env;
    env.obstacles = {square(3, 3, 1)};
    const Point2 p{0, 0}, pg{1.5, 0}, r_plus{0.1, 0.05};
    const auto res = star::environment_modification(env, p, pg, r_plus, nullptr, params);
    CHECK(res.rho == doctest::Approx(0.2));
    CHECK(geom::distance(res.r0, r_plus) < 1e-6);  // r_plus already in P0
    CHECK(geom::distance(res.rg, pg) < 1e-12);
    CHECK(res.is_dsw);
    CHECK((res.r0 - p).norm() <= res.rho + 1e-9);
  }

  SUBCASE("narrow gap: rho reduced to alpha * dist") {
    // Two squares with a 0.22 m gap; the robot sits between them, so
    // inflating by 0.2 swallows the robot position: p outside C^0.2.
    Environment env;
    env.obstacles = {square(-1.11, -0.5, 1), square(0.11, -0.5, 1)};
    const Point2 p{0, 0};
    const double d = geom::signed_clearance(p, env.workspace, env.obstacles);
    CHECK(d == doctest::Approx(0.11));
    const auto res = star::environment_modification(env, p, {0, 3}, p, nullptr, params);
    CHECK(res.rho == doctest::Approx(0.9 * 0.11));
    CHECK((res.r0 - p).norm() <= res.rho + 1e-9);
  }

  SUBCASE("robot in collision throws") {
    Environment env;
    env.obstacles = {square(-0.5, -0.5, 1)};
    CHECK_THROWS_AS(
        star::environment_modification(env, {0, 0}, {2, 2}, {0, 0}, nullptr, params),
        nav2d::RobotInCollision);
  }

  SUBCASE("r0 and rg are never interior to star obstacles") {
    util::Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      auto item = util::Rng::forked(99, trial);
      const auto scene = verify::random_dsw_equivalent_scene(item, 0.2, trial % 2 == 1);
      const auto res = star::environment_modification(scene.env, scene.robot, scene.goal,
                                                      scene.robot, nullptr, params);
      for (const auto& o : res.star_world.obstacles) {
        CHECK_FALSE(o.polygon.strictly_contains(res.r0, 1e-9));
        CHECK_FALSE(o.polygon.strictly_contains(res.rg, 1e-9));
      }
    }
  }
}

TEST_CASE("cache reuse is bit-identical on static scenes") {
  Environment env;
  env.obstacles = {disk({2, 0}, 0.8), disk({2.9, 0}, 0.8)};
  const Point2 pg{5, 0};
  star::EnvModParams params;

  const auto first =
      star::environment_modification(env, {0, 0}, pg, {0, 0}, nullptr, params);
  REQUIRE(first.is_dsw);
  const StarWorld cached = first.star_world;

  const auto second =
      star::environment_modification(env, {0.05, 0}, pg, first.r0, &cached, params);
  CHECK(second.reused_cached);
  REQUIRE(second.star_world.obstacles.size() == cached.obstacles.size());
  for (std::size_t i = 0; i < cached.obstacles.size(); ++i) {
    CHECK(second.star_world.obstacles[i].polygon.vertices() ==
          cached.obstacles[i].polygon.vertices());
  }
}

TEST_CASE("theorem 1 property: randomized DSW-equivalent environments") {
  const int kTrials = 25;  // the full 100-case run lives in the acceptance suite
  std::vector<int> ok(kTrials, 0);
  util::parallel_for(kTrials, [&](int trial) {
    auto item = util::Rng::forked(1234, trial);
    const auto scene = verify::random_dsw_equivalent_scene(item, 0.2, trial % 3 == 0);
    star::EnvModParams params;
    const auto res = star::environment_modification(scene.env, scene.robot, scene.goal,
                                                    scene.robot, nullptr, params);
    if (!res.is_dsw) return;
    // Union preservation vs the inflated input set (before convexification).
    const double base = PolygonSet(res.obstacles_rho).area();
    const double sd = sym_diff_area(res.obstacles_before_convexification, res.obstacles_rho);
    if (sd <= 1e-6 * base) ok[trial] = 1;
  });
  int total = 0;
  for (int v : ok) total += v;
  CHECK(total == kTrials);
}

TEST_CASE("equivalence of C^rho membership and P0 nonempty") {
  // Independent check: dist(p, F^rho) <= rho  <=>  P0 nonempty, up to the
  // arc-discretization band around the threshold.
  util::Rng rng(555);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto item = util::Rng::forked(555, trial);
    const auto scene = verify::random_dsw_equivalent_scene(item, 0.2, false);
    const double rho = 0.2;
    geom::PolyList inflated;
    for (const auto& o : scene.env.obstacles) inflated.push_back(geom::inflate(o, rho));
    const Point2 p{item.uniform(-6, 6), item.uniform(-6, 6)};
    if (!geom::free_set_contains(p, scene.env.workspace, scene.env.obstacles)) continue;

    // Route 1: P0 = F^rho intersect B[p, rho] computed geometrically.
    const Polygon2 ball = geom::polygonize_disk(p, rho, geom::ArcFit::Inner);
    const PolygonSet p0 = geom::boolean_op(PolygonSet(ball), geom::union_all(inflated),
                                           geom::BoolOp::Difference);
    const bool route1 = p0.area() > 1e-12;
    // Route 2: projection distance onto F^rho.
    const Point2 proj = geom::project_to_free_set(p, scene.env.workspace, inflated);
    const double d = geom::distance(p, proj);
    const bool route2 = d <= rho;
    if (route1 != route2) {
      // Disagreement is only allowed in the discretization band.
      CHECK(std::abs(d - rho) <= 5e-4);
    }
    ++checked;
  }
  CHECK(checked > 100);
}
