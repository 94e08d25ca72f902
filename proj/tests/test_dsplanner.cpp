#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nav2d/dsplanner/modulation.hpp"
#include "nav2d/dsplanner/rhrp.hpp"
#include "nav2d/util/rng.hpp"
#include "nav2d/verify/env_gen.hpp"

using namespace nav2d;
using ds::ModulationField;
using ds::Rhrp;
using geom::ArcFit;
using geom::Point2;
using geom::Polygon2;
using geom::Region;
using star::StarWorld;

namespace {

StarWorld empty_world() {
  StarWorld sw;
  sw.workspace_rho = Region::full_plane();
  sw.rho = 0.2;
  return sw;
}

StarWorld disk_world(const Point2& c, double radius) {
  StarWorld sw;
  sw.workspace_rho = Region::full_plane();
  sw.rho = 0.2;
  const Polygon2 poly = geom::polygonize_disk(c, radius, ArcFit::Outer);
  sw.obstacles.push_back({poly, {c}, c});
  return sw;
}

}  // namespace

TEST_CASE("eval_dynamics basics") {
  SUBCASE("empty star world gives the pure attraction field") {
    const ModulationField field(empty_world(), {1, 0});
    const Point2 eta = field.eval({0, 0});
    CHECK(eta.x == doctest::Approx(1.0));
    CHECK(eta.y == doctest::Approx(0.0));
  }
  SUBCASE("zero at the goal") {
    const ModulationField field(disk_world({3, 0}, 1.0), {1, 0});
    const Point2 eta = field.eval({1, 0});
    CHECK(eta.norm() == doctest::Approx(0.0));
  }
  SUBCASE("strictly inside an obstacle throws") {
    const ModulationField field(disk_world({3, 0}, 1.0), {0, 0});
    CHECK_THROWS_AS(field.eval({3, 0.2}), nav2d::OutsideFreeSpace);
  }
  SUBCASE("gamma is 1 on the boundary and grows outward") {
    const ModulationField field(disk_world({0, 0}, 1.0), {5, 0});
    CHECK(field.gamma(0, {2, 0}) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(field.gamma(0, {1.0001, 0}) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("boundary tangency: outward-normal component is non-negative") {
  // Goal behind the obstacle; sample edge midpoints (exactly on the boundary).
  const StarWorld sw = disk_world({0, 0}, 1.0);
  const ModulationField field(sw, {-4, 0});
  const Polygon2& poly = sw.obstacles[0].polygon;
  int checked = 0;
  for (std::size_t i = 0; i < poly.size() && checked < 100; i += poly.size() / 100 + 1) {
    const geom::Segment e = poly.edge(i);
    const Point2 mid = e.at(0.5);
    const Point2 n = Point2{(e.b - e.a).y, -(e.b - e.a).x}.normalized();
    const Point2 eta = field.eval(mid);
    CHECK(n.dot(eta) >= -1e-6);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("integrate_rhrp") {
  SUBCASE("r0 equal to goal yields the singleton path") {
    const ModulationField field(empty_world(), {2, 1});
    const Rhrp path = ds::integrate_rhrp(field, {2, 1}, 1.2, 0.2);
    CHECK(path.is_singleton());
    CHECK(path.eval(0.0) == Point2{2, 1});
  }
  SUBCASE("empty world: straight segment of length L") {
    const ModulationField field(empty_world(), {10, 0});
    Rhrp path = ds::integrate_rhrp(field, {0, 0}, 1.2, 0.2);
    ds::fit_polynomial(path);
    CHECK(path.length() == doctest::Approx(1.2));
    const Point2 end = path.eval(1.2);
    CHECK(end.x == doctest::Approx(1.2).epsilon(1e-6));
    CHECK(std::abs(end.y) < 1e-9);
    CHECK(geom::distance(path.eval(0.0), Point2{0, 0}) < 1e-9);
    // Unit speed: consecutive samples are ds apart.
    const auto& ss = path.samples();
    for (std::size_t i = 1; i < ss.size(); ++i) {
      const double step = geom::distance(ss[i].r, ss[i - 1].r);
      CHECK(step == doctest::Approx(ss[i].s - ss[i - 1].s).epsilon(0.05));
    }
  }
  SUBCASE("obstacle between start and goal: path curves around with clearance") {
    // Star world built from a 0.2-inflated disk; raw obstacle is the disk.
    const Point2 c{2, 0};
    const Polygon2 raw = geom::polygonize_disk(c, 0.5, ArcFit::Outer);
    StarWorld sw;
    sw.workspace_rho = Region::full_plane();
    sw.rho = 0.2;
    sw.obstacles.push_back({geom::inflate(raw, 0.2), {c}, c});

    const ModulationField field(sw, {4, 0});
    const Rhrp path = ds::integrate_rhrp(field, {0.05, 0.02}, 4.5, 0.2);
    bool curved = false;
    for (const auto& sample : path.samples()) {
      CHECK(geom::distance(sw.obstacles[0].polygon, sample.r) >= -1e-9);
      CHECK(raw.distance_to(sample.r) >= 0.2 - 1e-6);
      curved |= std::abs(sample.r.y) > 0.05;
    }
    CHECK(curved);
  }
  SUBCASE("determinism: identical inputs give bit-identical paths") {
    const ModulationField field(disk_world({2, 0}, 0.8), {4, 0});
    const Rhrp a = ds::integrate_rhrp(field, {0, 0.01}, 1.2, 0.2);
    const Rhrp b = ds::integrate_rhrp(field, {0, 0.01}, 1.2, 0.2);
    REQUIRE(a.samples().size() == b.samples().size());
    for (std::size_t i = 0; i < a.samples().size(); ++i) {
      CHECK(a.samples()[i].r == b.samples()[i].r);
      CHECK(a.samples()[i].s == b.samples()[i].s);
    }
  }
}

TEST_CASE("fit_polynomial") {
  SUBCASE("straight line fits exactly") {
    std::vector<ds::RhrpSample> samples;
    for (int i = 0; i <= 100; ++i) {
      const double s = 1.2 * i / 100.0;
      samples.push_back({s, Point2{s, 0.5 * s}});
    }
    Rhrp path = Rhrp::from_samples(std::move(samples), 0.2, {1.2, 0.6});
    ds::fit_polynomial(path);
    CHECK(path.max_fit_residual() < 1e-9);
  }
  SUBCASE("quarter circle arc fits below 1e-4") {
    std::vector<ds::RhrpSample> samples;
    const double L = 1.2;
    for (int i = 0; i <= 120; ++i) {
      const double s = L * i / 120.0;  // arc length = angle on unit circle
      samples.push_back({s, Point2{std::cos(s), std::sin(s)}});
    }
    Rhrp path = Rhrp::from_samples(std::move(samples), 0.2, samples.empty() ? Point2{} : Point2{std::cos(L), std::sin(L)});
    ds::fit_polynomial(path);
    CHECK(path.max_fit_residual() < 1e-4);
  }
  SUBCASE("singleton gives constant polynomials") {
    Rhrp path = Rhrp::singleton({3, 4}, 0.2);
    CHECK(path.eval(0.0) == Point2{3, 4});
  }
  SUBCASE("eval out of range throws") {
    Rhrp path = Rhrp::singleton({0, 0}, 0.2);
    CHECK_THROWS_AS(path.eval(0.5), nav2d::OutOfRange);
  }
}

TEST_CASE("positive invariance over random DSWs (reduced; full run in verify suite)") {
  int rollouts = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto rng = util::Rng::forked(321, trial);
    const auto scene = verify::random_dsw_equivalent_scene(rng, 0.2, trial % 2 == 0);
    const auto res = star::environment_modification(scene.env, scene.robot, scene.goal,
                                                    scene.robot, nullptr, {});
    if (!res.is_dsw) continue;
    const ModulationField field(res.star_world, res.rg);
    for (int k = 0; k < 20; ++k) {
      // Random free start inside the star world.
      Point2 start;
      bool found = false;
      for (int attempt = 0; attempt < 100 && !found; ++attempt) {
        start = {rng.uniform(-6, 6), rng.uniform(-6, 6)};
        found = res.star_world.workspace_rho.contains(start);
        for (const auto& o : res.star_world.obstacles) {
          found &= !o.polygon.contains(start, 1e-6);
        }
      }
      if (!found) continue;
      const Rhrp path = ds::integrate_rhrp(field, start, 2.0, res.rho);
      for (const auto& sample : path.samples()) {
        for (const auto& o : res.star_world.obstacles) {
          CHECK(o.polygon.distance_to(sample.r) >= -1e-6);
        }
      }
      ++rollouts;
    }
  }
  CHECK(rollouts > 50);
}

TEST_CASE("convergence of the unnormalized dynamics in a DSW") {
  auto rng = util::Rng::forked(777, 3);
  const auto scene = verify::random_dsw_equivalent_scene(rng, 0.2, false);
  const auto res =
      star::environment_modification(scene.env, scene.robot, scene.goal, scene.robot, nullptr, {});
  REQUIRE(res.is_dsw);
  const ModulationField base(res.star_world, res.rg);

  int converged = 0, tried = 0;
  for (int k = 0; k < 20; ++k) {
    Point2 r{rng.uniform(-6, 6), rng.uniform(-6, 6)};
    bool free = true;
    for (const auto& o : res.star_world.obstacles) free &= !o.polygon.contains(r, 1e-6);
    if (!free) continue;
    ++tried;
    const ModulationField field = base.with_references_off_segment(r);
    // Euler integration of the unnormalized dynamics.
    const double dt = 0.02;
    bool ok = false;
    for (int step = 0; step < 20000; ++step) {
      const Point2 eta = field.eval_clamped(r);
      r += eta * dt;
      if (geom::distance(r, res.rg) < 1e-3) {
        ok = true;
        break;
      }
    }
    converged += ok ? 1 : 0;
  }
  CHECK(tried >= 10);
  // Tolerate the measure-zero saddle set.
  CHECK(converged >= tried - 1);
}
