#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nav2d/geometry/boolean.hpp"
#include "nav2d/geometry/ops.hpp"
#include "nav2d/geometry/types.hpp"
#include "nav2d/util/rng.hpp"
#include "nav2d/verify/oracles.hpp"

using namespace nav2d;
using geom::ArcFit;
using geom::BoolOp;
using geom::Point2;
using geom::PolyList;
using geom::Polygon2;
using geom::PolygonSet;
using geom::Region;

namespace {

Polygon2 square(double x0, double y0, double side) {
  return Polygon2({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

const Polygon2 kLShape({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});

}  // namespace

TEST_CASE("polygon construction validates and normalizes") {
  CHECK_THROWS_AS(Polygon2({{0, 0}, {1, 0}}), nav2d::InvalidGeometry);
  CHECK_THROWS_AS(Polygon2({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), nav2d::InvalidGeometry);
  // CW input is reoriented to CCW.
  const Polygon2 p({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(p.area() == doctest::Approx(1.0));
  // Self-touching "annulus-like" boundary is rejected as non-simple.
  CHECK_THROWS_AS(Polygon2({{0, 0}, {4, 0}, {4, 4}, {0, 4}, {0, 0}, {1, 1}, {3, 1},
                            {3, 3}, {1, 3}, {1, 1}}),
                  nav2d::InvalidGeometry);
}

TEST_CASE("polygon_kernel of convex polygon is the polygon") {
  const Polygon2 sq = square(0, 0, 2);
  const auto k = geom::polygon_kernel(sq);
  REQUIRE(k.has_value());
  CHECK(k->area() == doctest::Approx(4.0));
  CHECK(k->vertices() == sq.vertices());
}

TEST_CASE("polygon_kernel of L-shape matches the grid-visibility oracle") {
  const auto k = geom::polygon_kernel(kLShape);
  REQUIRE(k.has_value());
  // Expected kernel: the unit square [0,1]x[0,1].
  CHECK(k->area() == doctest::Approx(1.0).epsilon(1e-9));
  for (const Point2 c : {Point2{0.5, 0.5}, Point2{0.99, 0.99}, Point2{0.01, 0.01}}) {
    CHECK(k->contains(c));
  }
  CHECK_FALSE(k->contains({1.1, 0.5}, 1e-12));

  const auto res = verify::grid_kernel_iou(kLShape, k, 0.01, 0.02);
  CHECK(res.iou >= 0.99);
}

TEST_CASE("polygon_kernel of comb polygon is empty") {
  const Polygon2 comb = verify::comb_polygon({0, 0}, 1.0);
  const auto k = geom::polygon_kernel(comb);
  CHECK_FALSE(k.has_value());
  const auto res = verify::grid_kernel_iou(comb, k, 0.02, 0.04);
  CHECK(res.kernel_cells == 0);  // oracle agrees: no fully visible grid point
}

TEST_CASE("is_strictly_starshaped") {
  const Polygon2 pentagon({{1, 0}, {0.31, 0.95}, {-0.81, 0.59}, {-0.81, -0.59}, {0.31, -0.95}});
  CHECK(geom::is_strictly_starshaped(pentagon));
  CHECK(geom::is_strictly_starshaped(kLShape));
  CHECK(geom::is_strictly_starshaped_wrt(kLShape, {0.5, 0.5}));
  CHECK_FALSE(geom::is_strictly_starshaped(verify::comb_polygon({0, 0}, 1.0)));
}

TEST_CASE("convex_hull") {
  const Polygon2 sq = square(0, 0, 1);
  const Polygon2 h = geom::convex_hull(sq.vertices());
  CHECK(h.area() == doctest::Approx(1.0));

  const Polygon2 hl = geom::convex_hull(kLShape.vertices());
  CHECK(hl.size() == 5);  // (1,1) dropped
  CHECK(hl.area() == doctest::Approx(3.5));

  CHECK_THROWS_AS(geom::convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), nav2d::DegenerateHull);

  util::Rng rng(7);
  std::vector<Point2> pts;
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(0, 2 * M_PI);
    const double r = std::sqrt(rng.uniform(0, 1));
    pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  const Polygon2 hull = geom::convex_hull(pts);
  for (const Point2& p : pts) CHECK(hull.contains(p, 1e-9));
  for (const Point2& v : hull.vertices()) {
    bool is_input = false;
    for (const Point2& p : pts) is_input |= geom::approx_equal(v, p, 1e-12);
    CHECK(is_input);
  }
}

TEST_CASE("inflate: identity at rho=0 and Steiner area bound") {
  const Polygon2 sq = square(0, 0, 1);
  CHECK(geom::inflate(sq, 0.0).vertices() == sq.vertices());

  const Polygon2 infl = geom::inflate(sq, 0.2);
  const double exact = 1.0 + 4 * 0.2 + M_PI * 0.04;
  CHECK(infl.area() >= exact - 1e-9);
  CHECK(infl.area() <= exact + 1e-3);
}

TEST_CASE("inflate is an outer approximation (clearance soundness)") {
  util::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto item = util::Rng::forked(11, trial);
    const Polygon2 poly = verify::random_simple_polygon(item, {0, 0}, 1.5);
    const double rho = item.uniform(0.05, 0.4);
    const Polygon2 infl = geom::inflate(poly, rho);
    // Points just outside the inflated region must be >= rho - 1e-4 from poly.
    for (std::size_t i = 0; i < infl.size(); i += 3) {
      const geom::Segment e = infl.edge(i);
      const Point2 mid = e.at(0.5);
      const Point2 n = (e.b - e.a).perp().normalized() * -1.0;  // outward
      const Point2 q = mid + n * 1e-6;
      if (infl.contains(q, 0.0)) continue;
      CHECK(geom::distance(poly, q) >= rho - 1e-4 - 1e-5);
    }
  }
}

TEST_CASE("inflation monotonicity") {
  util::Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto item = util::Rng::forked(13, trial);
    const Polygon2 poly = verify::random_simple_polygon(item, {0, 0}, 1.5);
    const double r1 = item.uniform(0.02, 0.2);
    const double r2 = r1 + item.uniform(0.05, 0.3);
    const Polygon2 a = geom::inflate(poly, r1);
    const Polygon2 b = geom::inflate(poly, r2);
    for (const Point2& v : a.vertices()) CHECK(b.contains(v, 1e-6));
  }
}

TEST_CASE("erode_workspace") {
  CHECK(geom::erode_workspace(Region::full_plane(), 1.0).is_full_plane());

  const Region disk = Region::disk({0, 0}, 4.0, ArcFit::Inner);
  const Region eroded = geom::erode_workspace(disk, 0.2);
  REQUIRE(eroded.is_polygon());
  const double expect = M_PI * 3.8 * 3.8;
  CHECK(eroded.poly().area() == doctest::Approx(expect).epsilon(2e-3));
  // Inner approximation: every eroded point keeps >= rho to the boundary.
  for (const Point2& v : eroded.poly().vertices()) {
    CHECK(disk.poly().boundary_distance(v) >= 0.2 - 2e-4);
  }

  const Region small = Region::polygon(square(0, 0, 0.3));
  CHECK(geom::erode_workspace(small, 0.2).is_empty_set());
}

TEST_CASE("erosion/inflation duality on convex input") {
  util::Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto item = util::Rng::forked(17, trial);
    std::vector<Point2> pts;
    for (int i = 0; i < 12; ++i) {
      pts.push_back({item.uniform(-1, 1), item.uniform(-1, 1)});
    }
    const Polygon2 conv = geom::convex_hull(pts);
    const double rho = item.uniform(0.05, 0.3);
    const Region closed =
        geom::erode_workspace(Region::polygon(geom::inflate(conv, rho)), rho);
    REQUIRE(closed.is_polygon());
    for (const Point2& v : conv.vertices()) CHECK(closed.poly().contains(v, 1e-3));
  }
}

TEST_CASE("boolean operations") {
  const Polygon2 a = square(0, 0, 1);

  SUBCASE("idempotent union") {
    const PolygonSet u = geom::boolean_op(PolyList{a}, PolyList{a}, BoolOp::Union);
    CHECK(u.area() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("overlapping squares") {
    const Polygon2 b = square(0.5, 0, 1);  // shares half its area with a
    const PolygonSet u = geom::boolean_op(PolyList{a}, PolyList{b}, BoolOp::Union);
    CHECK(u.area() == doctest::Approx(1.5).epsilon(1e-9));
    const PolygonSet i = geom::boolean_op(PolyList{a}, PolyList{b}, BoolOp::Intersection);
    CHECK(i.area() == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("disjoint intersection empty") {
    const Polygon2 c = square(5, 5, 1);
    CHECK(geom::boolean_op(PolyList{a}, PolyList{c}, BoolOp::Intersection).empty());
  }
  SUBCASE("union can produce holes and area stays hole-aware") {
    // Frame: big square minus inner square, as four overlapping slabs.
    const Polygon2 bottom({{0, 0}, {4, 0}, {4, 1}, {0, 1}});
    const Polygon2 top({{0, 3}, {4, 3}, {4, 4}, {0, 4}});
    const Polygon2 left({{0, 0}, {1, 0}, {1, 4}, {0, 4}});
    const Polygon2 right({{3, 0}, {4, 0}, {4, 4}, {3, 4}});
    const PolygonSet frame = geom::union_all({bottom, top, left, right});
    CHECK(frame.has_holes());
    CHECK(frame.area() == doctest::Approx(16.0 - 4.0).epsilon(1e-9));
    CHECK(frame.contains({0.5, 0.5}));
    CHECK_FALSE(frame.contains({2.0, 2.0}));
  }
}

TEST_CASE("boolean area arithmetic property") {
  util::Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    auto item = util::Rng::forked(19, trial);
    const Polygon2 a = verify::random_simple_polygon(item, {0, 0}, 1.5);
    const Polygon2 b = verify::random_simple_polygon(
        item, {item.uniform(-1, 1), item.uniform(-1, 1)}, 1.5);
    const double uni = geom::boolean_op(PolyList{a}, PolyList{b}, BoolOp::Union).area();
    const double inter =
        geom::boolean_op(PolyList{a}, PolyList{b}, BoolOp::Intersection).area();
    const double lhs = uni + inter;
    const double rhs = a.area() + b.area();
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs));
  }
}

TEST_CASE("distance") {
  const Polygon2 sq = square(1, 1, 1);  // [1,2]^2
  CHECK(geom::distance(sq, Point2{0, 0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(geom::distance(sq, Point2{1.5, 1.5}) == 0.0);

  const Polygon2 a = square(0, 0, 2);
  CHECK(geom::distance(a, sq) == 0.0);  // overlapping
  const Polygon2 far = square(5, 0, 1);
  CHECK(geom::distance(a, far) == doctest::Approx(3.0));
  // Symmetry
  CHECK(geom::distance(far, a) == doctest::Approx(3.0));
}

TEST_CASE("signed_clearance") {
  const Region ws = Region::disk({0, 0}, 4.0, ArcFit::Inner);
  CHECK(geom::signed_clearance({0, 0}, ws, {}) == doctest::Approx(4.0).epsilon(1e-3));

  const Polygon2 obs = square(1, 1, 1);
  CHECK(geom::signed_clearance({0, 0}, Region::full_plane(), {obs}) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(geom::signed_clearance({1, 1}, Region::full_plane(), {obs}) ==
        doctest::Approx(0.0));
}

TEST_CASE("kernel IoU across random polygons (propagated spec property)") {
  const int kTrials = 25;
  int pass = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    auto item = util::Rng::forked(23, trial);
    const Polygon2 poly = verify::random_simple_polygon(item, {0, 0}, 1.6);
    const auto kernel = geom::polygon_kernel(poly);
    if (kernel) CHECK(kernel->is_convex(1e-7));
    const auto res = verify::grid_kernel_iou(poly, kernel, 0.02, 0.04);
    if (res.iou >= 0.99 || res.both_empty) ++pass;
  }
  CHECK(pass == kTrials);
}

TEST_CASE("free set helpers") {
  const Region ws = Region::polygon(square(0, 0, 10));
  const PolyList obs{square(4, 4, 2)};

  CHECK(geom::free_closure_contains({1, 1}, ws, obs));
  CHECK_FALSE(geom::free_closure_contains({5, 5}, ws, obs));
  CHECK(geom::free_closure_contains({4, 5}, ws, obs));   // obstacle boundary
  CHECK_FALSE(geom::free_set_contains({4, 5}, ws, obs));  // strict: boundary collides

  const Point2 proj = geom::project_to_free_set({5, 5}, ws, obs);
  CHECK(geom::distance(obs[0], proj) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK((proj - Point2{5, 5}).norm() == doctest::Approx(1.0));

  // Projection with full-plane workspace.
  const Point2 proj2 = geom::project_to_free_set({5, 5}, Region::full_plane(), obs);
  CHECK((proj2 - Point2{5, 5}).norm() == doctest::Approx(1.0));

  // Signed clearance goes negative inside obstacles.
  CHECK(geom::signed_free_clearance({5, 5}, ws, obs) == doctest::Approx(-1.0));
  CHECK(geom::signed_free_clearance({2, 2}, ws, obs) == doctest::Approx(2.0));
}
