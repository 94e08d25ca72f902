#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nav2d/dsplanner/rhrp.hpp"
#include "nav2d/mpc/mpc.hpp"
#include "nav2d/util/rng.hpp"
#include "nav2d/verify/mpc_oracle.hpp"

using namespace nav2d;
using geom::Point2;
using mpc::MpcParams;
using mpc::MpcProblem;
using mpc::MpcSolution;
using sim::Input;
using sim::UnicycleState;

namespace {

// Straight reference path along +x of length L starting at the origin.
ds::Rhrp straight_path(double L, double rho) {
  std::vector<ds::RhrpSample> samples;
  for (int i = 0; i <= 200; ++i) {
    const double s = L * i / 200.0;
    samples.push_back({s, Point2{s, 0.0}});
  }
  ds::Rhrp path = ds::Rhrp::from_samples(std::move(samples), rho, {L, 0.0});
  ds::fit_polynomial(path);
  return path;
}

MpcParams default_params() {
  MpcParams p;
  p.validate(0.2);
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  MpcParams p;
  CHECK_NOTHROW(p.validate(0.2));
  p.lambda = 2.0;
  CHECK_THROWS_AS(p.validate(0.2), nav2d::InvalidProblem);
  p.lambda = 0.5;
  p.w_max = 0.1;  // lambda * rho_bar > w_max * dt
  CHECK_THROWS_AS(p.validate(0.2), nav2d::InvalidProblem);
}

TEST_CASE("tunnel MPC tracks a straight path with the forward bound active") {
  const MpcParams params = default_params();
  const ds::Rhrp path = straight_path(1.2, 0.2);

  MpcProblem problem;
  problem.initial_state = {0.0, 0.0, 0.0};  // at r0, aligned
  problem.rho = 0.2;
  problem.previous_input = {0.0, 0.0};

  const MpcSolution sol = mpc::solve_tunnel_mpc(problem, path, params);
  REQUIRE(sol.feasible);
  // Eq. 7h: w0 >= lambda rho / dt = 0.5 exactly or above.
  CHECK(sol.path_speeds[0] >= 0.5 - 1e-9);
  CHECK(sol.path_speeds[0] * params.dt >= params.lambda * problem.rho - 1e-9);
  // Tracking stays inside the tube.
  CHECK(mpc::max_tracking_error(problem, path, params, sol) <= problem.rho + 1e-6);
  // Path coordinate is non-decreasing and within [0, L].
  for (std::size_t i = 1; i < sol.predicted_s.size(); ++i) {
    CHECK(sol.predicted_s[i] >= sol.predicted_s[i - 1] - 1e-12);
  }
  CHECK(sol.predicted_s.back() <= path.length() + 1e-6);
  // The robot makes real forward progress.
  CHECK(sol.predicted_states.back().x > 0.3);
}

TEST_CASE("misaligned robot outside the reachable tube is infeasible") {
  // The initial reference moves >= lambda rho while the robot, heading away
  // with tight omega and small reverse speed, cannot stay within the tube.
  const MpcParams params = default_params();
  const ds::Rhrp path = straight_path(1.2, 0.2);

  MpcProblem problem;
  problem.initial_state = {-0.15, 0.13, M_PI};
  problem.rho = 0.2;
  problem.previous_input = {0.0, 0.0};

  const MpcSolution sol = mpc::solve_tunnel_mpc(problem, path, params);
  CHECK_FALSE(sol.feasible);
  CHECK_FALSE(mpc::feasibility_fallback_check(problem, path, params));
}

TEST_CASE("feasibility_fallback_check accepts the stationary candidate near r0") {
  const MpcParams params = default_params();
  const ds::Rhrp path = straight_path(1.2, 0.2);
  MpcProblem problem;
  problem.initial_state = {0.02, 0.05, 0.3};
  problem.rho = 0.2;
  CHECK(mpc::feasibility_fallback_check(problem, path, params));
}

TEST_CASE("without 7h the stationary candidate is always feasible") {
  const MpcParams params = default_params();
  const ds::Rhrp path = straight_path(1.2, 0.2);
  util::Rng rng(42);
  for (int k = 0; k < 20; ++k) {
    // p within 0.98 rho of r0 (r0 construction guarantees <= rho).
    const double ang = rng.uniform(0, 2 * M_PI);
    const double rad = rng.uniform(0, 0.98 * 0.2 * mpc::kTrackingTubeFactor);
    MpcProblem problem;
    problem.initial_state = {rad * std::cos(ang), rad * std::sin(ang),
                             rng.uniform(-M_PI, M_PI)};
    problem.rho = 0.2;
    // 7h removed: the all-stop candidate with w = 0 keeps eps frozen at
    // eps(0) <= tube, hence feasible.
    MpcParams relaxed = params;
    relaxed.lambda = 1e-9;  // bound w0 >= ~0
    const bool ok = mpc::feasibility_fallback_check(problem, path, relaxed);
    CHECK(ok);
  }
}

TEST_CASE("grid oracle agrees with the solver on feasibility and cost") {
  MpcParams params = default_params();
  params.horizon = 3;  // the toy problem size

  int agreements = 0;
  const int kInstances = 8;  // full 20-instance run lives in the acceptance suite
  for (int k = 0; k < kInstances; ++k) {
    auto rng = util::Rng::forked(2024, k);
    const ds::Rhrp path = straight_path(0.6 + rng.uniform(0.0, 0.6), 0.2);
    MpcProblem problem;
    const bool hard = k % 2 == 1;
    if (hard) {
      problem.initial_state = {-0.15 + rng.uniform(-0.01, 0.01),
                               0.13 + rng.uniform(-0.01, 0.01), M_PI};
    } else {
      problem.initial_state = {rng.uniform(-0.02, 0.02), rng.uniform(-0.05, 0.05),
                               rng.uniform(-0.3, 0.3)};
    }
    problem.rho = 0.2;

    const auto oracle = verify::enumerate_tunnel_grid(problem, path, params);
    const MpcSolution sol = mpc::solve_tunnel_mpc(problem, path, params);
    const bool verdict_match = oracle.feasible == sol.feasible;
    CHECK(verdict_match);
    if (verdict_match && sol.feasible && oracle.feasible) {
      CHECK(sol.cost <= oracle.best_cost + 0.05 * std::abs(oracle.best_cost) + 1e-9);
    }
    agreements += verdict_match ? 1 : 0;
  }
  CHECK(agreements == kInstances);
}

TEST_CASE("standard MPPFC baseline") {
  MpcParams params = default_params();
  params.horizon = 12;  // twice the proposed horizon

  SUBCASE("obstacle-free straight path matches the tunnel solution closely") {
    const ds::Rhrp path = straight_path(2.4, 0.2);
    MpcProblem problem;
    problem.initial_state = {0.0, 0.0, 0.0};
    problem.rho = 0.2;

    mpc::ObstaclePrediction prediction;
    prediction.per_stage.assign(12, {});
    const MpcSolution base = mpc::solve_standard_mppfc(problem, path, prediction, params);
    REQUIRE(base.feasible);

    MpcParams tunnel_params = default_params();
    tunnel_params.horizon = 12;
    const MpcSolution tunnel = mpc::solve_tunnel_mpc(problem, path, tunnel_params);
    REQUIRE(tunnel.feasible);
    // Both drive straight ahead at full speed.
    CHECK(std::abs(base.predicted_states.back().x - tunnel.predicted_states.back().x) < 0.1);
    CHECK(std::abs(base.predicted_states.back().y) < 1e-3);
  }

  SUBCASE("a no-go disk on the path forces avoidance or stopping") {
    const ds::Rhrp path = straight_path(2.4, 0.2);
    MpcProblem problem;
    problem.initial_state = {0.0, 0.0, 0.0};
    problem.rho = 0.2;

    mpc::ObstaclePrediction prediction;
    prediction.per_stage.assign(
        12, {mpc::PredictedShape::disk({1.0, 0.0}, 0.45)});
    const MpcSolution sol = mpc::solve_standard_mppfc(problem, path, prediction, params);
    REQUIRE(sol.feasible);
    // No predicted position may penetrate the disk.
    for (const auto& st : sol.predicted_states) {
      CHECK(geom::distance(st.position(), {1.0, 0.0}) >= 0.45 - 1e-6);
    }
  }
}
