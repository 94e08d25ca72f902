#pragma once

#include <optional>
#include <vector>

#include "nav2d/control/reference_path.hpp"
#include "nav2d/control/sbc.hpp"
#include "nav2d/dsplanner/rhrp.hpp"
#include "nav2d/mpc/mpc.hpp"
#include "nav2d/starworld/starworld.hpp"

namespace nav2d::ctl {

enum class Mode { Mpc, Sbc };

/// Bundled control parameters (Table-style defaults).
struct ControlParams {
  star::EnvModParams env;   // rho_bar, alpha
  mpc::MpcParams mpc;       // dt, N, lambda, weights
  SbcGains sbc;             // k1, k2
  double l_nom = 2.0;       // nominal RHRP length (path following)

  void validate() const {
    mpc.validate(env.rho_bar);
    sbc.validate(env.rho_bar);
  }
};

/// The control law applied over one sampling period: a held input in MPC
/// MODE, the closed-loop backup law in SBC MODE.
struct ControlLaw {
  Mode mode = Mode::Sbc;
  sim::Input constant_input;   // MPC MODE
  geom::Point2 sbc_target;     // SBC MODE: kappa(., r0)
  SbcGains sbc_gains;

  sim::Input evaluate(const sim::UnicycleState& x) const {
    return mode == Mode::Mpc ? constant_input : sbc_unicycle(x, sbc_target, sbc_gains);
  }
};

/// Per-sample diagnostics recorded into traces.
struct StepDiagnostics {
  Mode mode = Mode::Sbc;
  double rho = 0.0;
  geom::Point2 r0, rg, r_plus;
  bool mpc_feasible = false;
  bool reused_cache = false;
  bool is_dsw = false;
  bool nominal_path_mode = false;
  bool path_fully_blocked = false;
  double w0 = 0.0;
  double theta = 0.0;      // path parameter (path following)
  double theta_hat = 0.0;  // instrumented virtual coordinate
  double mpc_violation = 0.0;
  int mpc_iterations = 0;
  int env_obstacles = 0;
  int star_obstacles = 0;
  ds::Rhrp rhrp;           // reference snapshot
  star::StarWorld star_world;
};

/// Scheduler (Eqs. 10-11): MPC MODE iff the RHRP is not a singleton and the
/// MPC solve is feasible; otherwise SBC MODE targeting r0.
struct ScheduleResult {
  Mode mode = Mode::Sbc;
  ControlLaw law;
  geom::Point2 r_plus;
};
ScheduleResult schedule(const mpc::MpcSolution& solution, const ds::Rhrp& rhrp,
                        const geom::Point2& r0, const geom::Point2& rg, const SbcGains& gains,
                        double dt);

/// Cache update (Alg. 1 lines 14-17): keep E* when it is a DSW, otherwise
/// reset to the nominal pair {W^rho_bar, {}}.
star::StarWorld update_cache(const star::EnvModResult& result);

/// Setpoint control scheme (Alg. 2): environment modification, DS-based
/// RHRP, tunnel MPC, scheduler.
class SetpointController {
 public:
  SetpointController(ControlParams params, const geom::Point2& goal);

  ControlLaw step(const star::Environment& env, const sim::UnicycleState& x);
  const StepDiagnostics& last() const { return diag_; }
  const geom::Point2& goal() const { return goal_; }
  void set_goal(const geom::Point2& goal) { goal_ = goal; }

 private:
  ControlParams params_;
  geom::Point2 goal_;
  geom::Point2 r_plus_;
  bool first_ = true;
  std::optional<star::StarWorld> cache_;
  std::optional<mpc::MpcSolution> warm_;
  sim::Input last_input_;
  double theta_hat_ = 0.0;
  StepDiagnostics diag_;
};

/// Nominal RHRP (Eqs. 12-14): line segment from r_plus to gamma(theta), then
/// the path itself, saturated at theta_g. Arc-length parametrized samples at
/// most `spacing` apart; the segment/path junction is kept as a breakpoint.
ds::Rhrp nominal_rhrp(const geom::Point2& r_plus, double theta, const ReferencePath& path,
                      double l_nom, double rho, double spacing = 0.01);

/// Path-following control scheme (Alg. 3).
class PathFollowingController {
 public:
  PathFollowingController(ControlParams params, ReferencePath path);

  ControlLaw step(const star::Environment& env, const sim::UnicycleState& x);
  const StepDiagnostics& last() const { return diag_; }
  double theta() const { return theta_; }
  const ReferencePath& path() const { return path_; }

 private:
  ControlParams params_;
  ReferencePath path_;
  geom::Point2 r_plus_;
  double theta_ = 0.0;
  bool first_ = true;
  std::optional<star::StarWorld> cache_;
  std::optional<mpc::MpcSolution> warm_;
  sim::Input last_input_;
  double theta_hat_ = 0.0;
  StepDiagnostics diag_;
};

/// Standard MPPFC baseline: path-following MPC with no-go-zone constraints
/// instead of the tunnel/forward-motion pair; stops on infeasibility.
class StandardMppfcController {
 public:
  StandardMppfcController(ControlParams params, ReferencePath path);

  ControlLaw step(const star::Environment& env, const mpc::ObstaclePrediction& prediction,
                  const sim::UnicycleState& x);
  const StepDiagnostics& last() const { return diag_; }
  double theta() const { return theta_; }
  const ReferencePath& path() const { return path_; }
  int horizon() const { return params_.mpc.horizon; }

 private:
  ControlParams params_;
  ReferencePath path_;
  double theta_ = 0.0;
  std::optional<mpc::MpcSolution> warm_;
  sim::Input last_input_;
  StepDiagnostics diag_;
};

}  // namespace nav2d::ctl
