#include "nav2d/sim/simulator.hpp"

#include <cmath>
#include <deque>

#include "nav2d/util/parallel.hpp"

namespace nav2d::sim {

using geom::Point2;
using geom::PolyList;
using geom::Region;

namespace {

struct EnvSnapshot {
  star::Environment env;            // what the controller sees
  PolyList physical_obstacles;      // what the collision monitor checks
  Region physical_workspace = Region::full_plane();
};

EnvSnapshot make_snapshot(const Scenario& scenario, double t_k, const Point2& p,
                          std::size_t region_index) {
  EnvSnapshot snap;
  snap.env.timestamp = t_k;

  switch (scenario.workspace.kind) {
    case WorkspaceSpec::Kind::FullPlane:
      snap.env.workspace = Region::full_plane();
      break;
    case WorkspaceSpec::Kind::Fixed:
      snap.env.workspace = scenario.workspace.fixed;
      break;
    case WorkspaceSpec::Kind::RobotCentered:
      snap.env.workspace =
          Region::disk(p, scenario.workspace.robot_radius, geom::ArcFit::Inner);
      break;
  }
  if (scenario.task == TaskKind::SubregionChain) {
    snap.env.workspace = Region::polygon(scenario.regions[region_index].workspace);
  }
  snap.physical_workspace = snap.env.workspace;

  for (const ObstacleScript& script : scenario.obstacles) {
    if (!script.active_at(t_k)) continue;
    geom::Polygon2 poly = script.shape.polygon_at(script.motion.offset_at(t_k));
    snap.physical_obstacles.push_back(poly);
    if (scenario.workspace.kind == WorkspaceSpec::Kind::RobotCentered &&
        snap.env.workspace.is_polygon() &&
        !geom::intersects(poly, snap.env.workspace.poly())) {
      continue;  // outside the sensed region
    }
    snap.env.obstacles.push_back(std::move(poly));
  }
  return snap;
}

mpc::ObstaclePrediction make_prediction(const Scenario& scenario, double t_k,
                                        const ctl::ControlParams& params, int horizon,
                                        const Region& workspace) {
  mpc::ObstaclePrediction pred;
  pred.workspace = workspace;
  pred.per_stage.resize(horizon);
  for (int i = 0; i < horizon; ++i) {
    const double t_stage = t_k + i * params.mpc.dt;
    for (const ObstacleScript& script : scenario.obstacles) {
      if (!script.active_at(t_stage)) continue;
      pred.per_stage[i].push_back(
          script.shape.predicted_at(script.motion.offset_at(t_stage)));
    }
  }
  return pred;
}

}  // namespace

RunResult run_single(const Scenario& scenario, const ctl::ControlParams& params,
                     int initial_state_index, const SimOptions& options) {
  scenario.validate();
  RunResult result;
  result.initial_state_index = initial_state_index;
  Metrics& metrics = result.metrics;

  UnicycleState x = scenario.initial_states.at(initial_state_index);
  const double dt = params.mpc.dt;
  const int substeps = static_cast<int>(std::round(dt / options.integration_dt));
  const int total_samples = static_cast<int>(std::ceil(scenario.duration / dt));

  // Controllers per task / controller kind.
  std::optional<ctl::SetpointController> setpoint;
  std::optional<ctl::PathFollowingController> path_following;
  std::optional<ctl::StandardMppfcController> baseline;
  std::size_t region_index = 0;

  ctl::ControlParams run_params = params;
  if (scenario.controller == ControllerKind::StandardMppfc) {
    run_params.mpc.horizon = 2 * params.mpc.horizon;  // N = 12 by convention
  }

  switch (scenario.task) {
    case TaskKind::Setpoint:
      if (scenario.controller == ControllerKind::StandardMppfc) {
        // The baseline is a path-following MPC; a setpoint task gets the
        // straight-line path to the goal.
        baseline.emplace(run_params,
                         ctl::ReferencePath::from_waypoints(
                             {scenario.initial_states.at(initial_state_index).position(),
                              scenario.goal}));
      } else {
        setpoint.emplace(run_params, scenario.goal);
      }
      break;
    case TaskKind::PathFollow:
      if (scenario.controller == ControllerKind::StandardMppfc) {
        baseline.emplace(run_params, scenario.path);
      } else {
        path_following.emplace(run_params, scenario.path);
      }
      break;
    case TaskKind::SubregionChain:
      setpoint.emplace(run_params, scenario.regions.front().goal);
      break;
  }

  const Point2 target = scenario.task_target();
  metrics.theta_g = scenario.path.empty() ? 0.0 : scenario.path.theta_g();
  metrics.duration = scenario.duration;

  std::deque<double> speed_window;
  const std::size_t window_len =
      static_cast<std::size_t>(options.stall_window / options.integration_dt);

  std::optional<EnvSnapshot> prev_snapshot;
  double t = 0.0;
  bool done = false;

  for (int k = 0; k < total_samples && !done; ++k) {
    const double t_k = k * dt;
    EnvSnapshot snap;
    try {
      if (scenario.task == TaskKind::SubregionChain) {
        region_index = subregion_supervisor(scenario.regions, x.position(), region_index);
        setpoint->set_goal(scenario.regions[region_index].goal);
      }
      snap = make_snapshot(scenario, t_k, x.position(), region_index);
    } catch (const SupervisorLost&) {
      metrics.supervisor_lost = true;
      break;
    }

    // Assumption 2 bookkeeping: obstacles must not move onto the robot.
    if (prev_snapshot) {
      const bool was_free = geom::free_set_contains(
          x.position(), prev_snapshot->physical_workspace, prev_snapshot->physical_obstacles);
      const bool is_free = geom::free_set_contains(x.position(), snap.physical_workspace,
                                                   snap.physical_obstacles);
      if (was_free && !is_free) ++metrics.assumption2_violations;
    }

    ctl::ControlLaw law;
    const ctl::StepDiagnostics* diag = nullptr;
    if (setpoint) {
      law = setpoint->step(snap.env, x);
      diag = &setpoint->last();
    } else if (path_following) {
      law = path_following->step(snap.env, x);
      diag = &path_following->last();
    } else {
      const auto prediction = make_prediction(scenario, t_k, run_params,
                                              run_params.mpc.horizon, snap.env.workspace);
      law = baseline->step(snap.env, prediction, x);
      diag = &baseline->last();
    }
    (law.mode == ctl::Mode::Mpc ? metrics.mpc_samples : metrics.sbc_samples) += 1;

    for (int i = 0; i < substeps; ++i) {
      const Input u = law.evaluate(x);
      x = rk4_step(x, u, options.integration_dt);
      t = t_k + (i + 1) * options.integration_dt;

      const double clearance = geom::signed_free_clearance(
          x.position(), snap.physical_workspace, snap.physical_obstacles);
      metrics.min_clearance = std::min(metrics.min_clearance, clearance);

      if (options.record_trace) {
        TraceRecord rec;
        rec.time = t;
        rec.state = x;
        rec.input = u;
        rec.mode = diag->mode;
        rec.rho = diag->rho;
        rec.r0 = diag->r0;
        rec.rg = diag->rg;
        rec.r_plus = diag->r_plus;
        rec.theta = diag->theta;
        rec.theta_hat = diag->theta_hat;
        rec.clearance = clearance;
        rec.mpc_feasible = diag->mpc_feasible;
        rec.mpc_violation = diag->mpc_violation;
        rec.mpc_iterations = diag->mpc_iterations;
        rec.control_sample = (i == 0);
        if (i == 0) {
          const auto& samples = diag->rhrp.samples();
          const std::size_t stride = std::max<std::size_t>(1, samples.size() / 20);
          for (std::size_t j = 0; j < samples.size(); j += stride) {
            rec.rhrp_points.push_back(samples[j].r);
          }
          if (!samples.empty()) rec.rhrp_points.push_back(samples.back().r);
        }
        result.trace.push_back(std::move(rec));
      }

      if (clearance < 0.0 && !metrics.collision) {
        metrics.collision = true;
        metrics.first_violation_time = t;
        done = true;
        break;
      }

      // Stall detector: mean speed below threshold over the window while far
      // from the target.
      speed_window.push_back(std::abs(u.v));
      if (speed_window.size() > window_len) speed_window.pop_front();
      if (speed_window.size() == window_len && !metrics.stalled) {
        double mean = 0.0;
        for (double s : speed_window) mean += s;
        mean /= static_cast<double>(window_len);
        const double dist = geom::distance(x.position(), target);
        const bool theta_short =
            scenario.task != TaskKind::PathFollow ||
            (path_following ? path_following->theta() : baseline ? baseline->theta() : 0.0) <
                metrics.theta_g - 1e-6;
        if (mean < options.stall_speed && dist > options.stall_min_distance && theta_short) {
          metrics.stalled = true;
          metrics.stall_time = t;
        }
      }

      // Convergence.
      if (!metrics.converged) {
        const double dist = geom::distance(x.position(), target);
        bool theta_done = true;
        if (scenario.task == TaskKind::PathFollow) {
          const double th = path_following ? path_following->theta()
                                           : (baseline ? baseline->theta() : 0.0);
          theta_done = th >= metrics.theta_g - 1e-6;
        }
        if (dist <= options.convergence_radius && theta_done) {
          metrics.converged = true;
          metrics.time_to_goal = t;
          if (options.stop_on_convergence) {
            done = true;
            break;
          }
        }
      }
    }
    prev_snapshot = std::move(snap);
  }

  metrics.final_distance_to_target = geom::distance(x.position(), target);
  if (path_following) {
    metrics.final_theta = path_following->theta();
    metrics.final_theta_hat = path_following->last().theta_hat;
  } else if (baseline) {
    metrics.final_theta = baseline->theta();
  } else if (setpoint) {
    metrics.final_theta_hat = setpoint->last().theta_hat;
  }
  return result;
}

std::vector<RunResult> run_scenario(const Scenario& scenario, const ctl::ControlParams& params,
                                    const SimOptions& options, bool parallel) {
  std::vector<RunResult> results(scenario.initial_states.size());
  util::parallel_for(
      static_cast<int>(scenario.initial_states.size()),
      [&](int i) { results[i] = run_single(scenario, params, i, options); }, parallel);
  return results;
}

}  // namespace nav2d::sim
