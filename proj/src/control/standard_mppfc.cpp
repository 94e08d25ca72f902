#include <cmath>

#include "nav2d/control/controller.hpp"

namespace nav2d::ctl {

using geom::Point2;

StandardMppfcController::StandardMppfcController(ControlParams params, ReferencePath path)
    : params_(std::move(params)), path_(std::move(path)) {
  // The baseline runs a doubled horizon by convention; the caller sets it.
  params_.mpc.validate(params_.env.rho_bar);
}

ControlLaw StandardMppfcController::step(const star::Environment& env,
                                         const mpc::ObstaclePrediction& prediction,
                                         const sim::UnicycleState& x) {
  // Reference r(s) = gamma(sat(theta + s, 0, theta_g)) over the horizon.
  const double L = params_.mpc.reference_length();
  std::vector<ds::RhrpSample> samples;
  const int n = std::max(2, static_cast<int>(std::ceil(L / 0.01)));
  std::vector<double> hints;
  for (int i = 0; i <= n; ++i) {
    const double s = L * i / n;
    const double th = std::min(theta_ + s, path_.theta_g());
    samples.push_back({s, path_.eval(th)});
  }
  if (theta_ + L > path_.theta_g() && path_.theta_g() > theta_) {
    hints.push_back(path_.theta_g() - theta_);
  }
  ds::Rhrp rhrp = ds::Rhrp::from_samples(std::move(samples), params_.env.rho_bar,
                                         path_.eval(path_.theta_g()), std::move(hints));
  ds::fit_polynomial(rhrp);

  mpc::MpcProblem problem;
  problem.initial_state = x;
  problem.rho = params_.env.rho_bar;
  problem.previous_input = last_input_;
  const mpc::MpcSolution solution =
      mpc::solve_standard_mppfc(problem, rhrp, prediction, params_.mpc, warm_ ? &*warm_ : nullptr);

  ControlLaw law;
  if (solution.feasible) {
    warm_ = solution;
    law.mode = Mode::Mpc;
    law.constant_input = solution.inputs.front();
    theta_ = std::min(theta_ + solution.path_speeds.front() * params_.mpc.dt, path_.theta_g());
    last_input_ = law.constant_input;
  } else {
    // No tunnel/backup structure in the baseline: hold still.
    warm_.reset();
    law.mode = Mode::Mpc;
    law.constant_input = {0.0, 0.0};
    last_input_ = law.constant_input;
  }

  diag_ = StepDiagnostics{};
  diag_.mode = law.mode;
  diag_.rho = params_.env.rho_bar;
  diag_.mpc_feasible = solution.feasible;
  diag_.w0 = solution.feasible ? solution.path_speeds.front() : 0.0;
  diag_.theta = theta_;
  diag_.mpc_violation = solution.max_violation;
  diag_.mpc_iterations = solution.iterations;
  diag_.env_obstacles = static_cast<int>(env.obstacles.size());
  diag_.rhrp = rhrp;
  return law;
}

}  // namespace nav2d::ctl
