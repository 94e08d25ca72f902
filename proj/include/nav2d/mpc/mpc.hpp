#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nav2d/dsplanner/rhrp.hpp"
#include "nav2d/geometry/types.hpp"
#include "nav2d/sim/unicycle.hpp"

namespace nav2d::mpc {

/// Tracking-tube tightening factor: the polynomial fit residual (at most
/// 0.01 rho) is budgeted inside the 7g margin.
inline constexpr double kTrackingTubeFactor = 0.99;

struct MpcParams {
  double dt = 0.2;
  int horizon = 6;  // N
  double lambda = 0.5;
  double c_w = 1.0;
  double c_e = 1.0;
  std::array<double, 2> input_weight{0.1, 0.1};        // diag(R)
  std::array<double, 2> input_rate_weight{0.1, 0.0};   // diag(R_Delta)
  sim::Input u_desired{1.0, 0.0};                      // [w_max, 0]
  double w_max = 1.0;
  int error_subsamples = 4;  // interior tracking-error checks per stage
  sim::InputBounds input_bounds;

  // Solver knobs.
  double feasibility_tol = 1e-6;
  int outer_iterations = 12;
  int inner_iterations = 60;
  int restarts = 3;

  double horizon_time() const { return dt * horizon; }
  /// L = T w^max.
  double reference_length() const { return horizon_time() * w_max; }

  /// Parameter-domain checks; rho_bar is needed for lambda*rho_bar <= w_max*dt.
  void validate(double rho_bar) const;
};

struct MpcProblem {
  sim::UnicycleState initial_state;
  double rho = 0.2;
  sim::Input previous_input;  // u_bar_{-1} for the rate penalty
};

struct MpcSolution {
  bool feasible = false;
  std::vector<sim::Input> inputs;       // N
  std::vector<double> path_speeds;      // N (w_i)
  std::vector<sim::UnicycleState> predicted_states;  // N+1 stage boundaries
  std::vector<double> predicted_s;      // N+1
  double cost = 0.0;

  // Solver diagnostics (emitted into trace records).
  double max_violation = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  bool from_fallback_candidate = false;
  bool budget_exhausted = false;
};

/// Tunnel-following MPC (strict tracking tube, enforced initial forward
/// motion w_0 >= lambda rho / dt). Piecewise-constant inputs, RK4 stage
/// integration with `error_subsamples` interior tracking checks. Returns
/// feasible = false only after multi-start failure with the stationary
/// fallback candidate also infeasible.
MpcSolution solve_tunnel_mpc(const MpcProblem& problem, const ds::Rhrp& rhrp,
                             const MpcParams& params,
                             const MpcSolution* warm_start = nullptr);

/// Appendix-style stationary candidate (stop input, single initial path
/// step): validates solver infeasibility claims.
bool feasibility_fallback_check(const MpcProblem& problem, const ds::Rhrp& rhrp,
                                const MpcParams& params);

/// One predicted no-go shape; disks stay analytic so constraint evaluation
/// is O(1) instead of walking a finely polygonized ring.
struct PredictedShape {
  bool is_disk = false;
  geom::Point2 center;
  double radius = 0.0;
  geom::Polygon2 polygon;

  static PredictedShape disk(const geom::Point2& c, double r) {
    PredictedShape s;
    s.is_disk = true;
    s.center = c;
    s.radius = r;
    return s;
  }
  static PredictedShape from_polygon(geom::Polygon2 poly) {
    PredictedShape s;
    s.polygon = std::move(poly);
    return s;
  }

  /// Positive inside the shape (penetration depth), negative outside.
  double penetration(const geom::Point2& p) const {
    if (is_disk) return radius - geom::distance(p, center);
    const double bd = polygon.boundary_distance(p);
    return polygon.contains(p, 0.0) ? bd : -bd;
  }
};

/// Per-stage obstacle snapshots for the baseline (future poses assumed known).
struct ObstaclePrediction {
  std::vector<std::vector<PredictedShape>> per_stage;  // size N
  geom::Region workspace = geom::Region::full_plane();
};

/// Standard MPPFC baseline: same cost structure, tracking tube and forward
/// motion constraints replaced by no-go-zone constraints p(tau) not in O.
MpcSolution solve_standard_mppfc(const MpcProblem& problem, const ds::Rhrp& rhrp,
                                 const ObstaclePrediction& prediction, const MpcParams& params,
                                 const MpcSolution* warm_start = nullptr);

/// Tracking error against the fitted reference at every checkpoint of a
/// solution rollout (for invariant checks and traces).
double max_tracking_error(const MpcProblem& problem, const ds::Rhrp& rhrp,
                          const MpcParams& params, const MpcSolution& solution);

}  // namespace nav2d::mpc
