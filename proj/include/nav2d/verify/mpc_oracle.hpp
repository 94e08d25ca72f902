#pragma once

#include "nav2d/mpc/mpc.hpp"

namespace nav2d::verify {

struct GridOracleResult {
  bool feasible = false;
  double best_cost = 0.0;
  long long candidates = 0;
  long long feasible_candidates = 0;
};

/// Exhaustive enumeration of the tunnel MPC over the coarse input grid
/// v in {-0.1, 0, 0.5, 1} x omega in {-1, 0, 1}, w in {0, 0.5, 1} per stage.
/// Re-implements the rollout and constraint checks on purpose: it is the
/// solver-agnostic oracle for the feasibility verdict and cost bound.
GridOracleResult enumerate_tunnel_grid(const mpc::MpcProblem& problem, const ds::Rhrp& rhrp,
                                       const mpc::MpcParams& params);

}  // namespace nav2d::verify
