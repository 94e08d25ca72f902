#include "nav2d/control/controller.hpp"

namespace nav2d::ctl {

using geom::Point2;

SetpointController::SetpointController(ControlParams params, const Point2& goal)
    : params_(std::move(params)), goal_(goal) {
  params_.validate();
}

ControlLaw SetpointController::step(const star::Environment& env, const sim::UnicycleState& x) {
  const Point2 p = x.position();
  if (first_) {
    r_plus_ = p;
    first_ = false;
  }

  // Alg. 2 line 1: environment modification.
  const star::EnvModResult mod = star::environment_modification(
      env, p, goal_, r_plus_, cache_ ? &*cache_ : nullptr, params_.env);
  cache_ = update_cache(mod);

  // Line 2: receding-horizon reference path.
  ds::Rhrp rhrp;
  if (geom::distance(mod.r0, mod.rg) <= geom::kGeomTol) {
    rhrp = ds::Rhrp::singleton(mod.rg, mod.rho);
  } else {
    const ds::ModulationField field(mod.star_world, mod.rg);
    rhrp = ds::integrate_rhrp(field, mod.r0, params_.mpc.reference_length(), mod.rho);
    ds::fit_polynomial(rhrp);
  }

  // Line 3: tunnel MPC (bypassed for a singleton RHRP).
  mpc::MpcSolution solution;
  if (!rhrp.is_singleton()) {
    mpc::MpcProblem problem;
    problem.initial_state = x;
    problem.rho = mod.rho;
    problem.previous_input = last_input_;
    solution = mpc::solve_tunnel_mpc(problem, rhrp, params_.mpc, warm_ ? &*warm_ : nullptr);
    if (solution.feasible) warm_ = solution;
  }

  // Line 4: scheduler.
  const ScheduleResult sched =
      schedule(solution, rhrp, mod.r0, mod.rg, params_.sbc, params_.mpc.dt);
  r_plus_ = sched.r_plus;
  if (sched.mode == Mode::Mpc) {
    theta_hat_ += solution.path_speeds.front() * params_.mpc.dt;
    last_input_ = sched.law.constant_input;
  } else {
    warm_.reset();
    last_input_ = sbc_unicycle(x, sched.law.sbc_target, params_.sbc);
  }

  diag_ = StepDiagnostics{};
  diag_.mode = sched.mode;
  diag_.rho = mod.rho;
  diag_.r0 = mod.r0;
  diag_.rg = mod.rg;
  diag_.r_plus = r_plus_;
  diag_.mpc_feasible = solution.feasible;
  diag_.reused_cache = mod.reused_cached;
  diag_.is_dsw = mod.is_dsw;
  diag_.w0 = solution.feasible ? solution.path_speeds.front() : 0.0;
  diag_.theta_hat = theta_hat_;
  diag_.mpc_violation = solution.max_violation;
  diag_.mpc_iterations = solution.iterations;
  diag_.env_obstacles = static_cast<int>(env.obstacles.size());
  diag_.star_obstacles = static_cast<int>(mod.star_world.obstacles.size());
  diag_.rhrp = rhrp;
  diag_.star_world = mod.star_world;
  return sched.law;
}

}  // namespace nav2d::ctl
