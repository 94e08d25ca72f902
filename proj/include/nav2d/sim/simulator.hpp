#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nav2d/control/controller.hpp"
#include "nav2d/sim/scenario.hpp"

namespace nav2d::sim {

/// One 0.01 s integration step of a run. The reference-path snapshot is
/// populated (decimated) on control-sample boundaries only.
struct TraceRecord {
  double time = 0.0;
  UnicycleState state;
  Input input;
  ctl::Mode mode = ctl::Mode::Sbc;
  double rho = 0.0;
  geom::Point2 r0, rg, r_plus;
  double theta = 0.0;
  double theta_hat = 0.0;
  double clearance = 0.0;
  bool mpc_feasible = false;
  double mpc_violation = 0.0;
  int mpc_iterations = 0;
  bool control_sample = false;  // first substep of a sampling period
  std::vector<geom::Point2> rhrp_points;  // decimated snapshot
};

struct Metrics {
  bool converged = false;
  double time_to_goal = -1.0;
  double min_clearance = std::numeric_limits<double>::infinity();
  bool collision = false;
  double first_violation_time = -1.0;
  bool stalled = false;
  double stall_time = -1.0;
  double final_theta = 0.0;
  double theta_g = 0.0;
  double final_theta_hat = 0.0;
  int mpc_samples = 0;
  int sbc_samples = 0;
  int assumption2_violations = 0;
  bool supervisor_lost = false;
  double duration = 0.0;
  double final_distance_to_target = 0.0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  Metrics metrics;
  int initial_state_index = 0;
};

struct SimOptions {
  double integration_dt = 0.01;  // 100 Hz
  bool record_trace = true;
  bool stop_on_convergence = true;
  double convergence_radius = 0.05;
  double stall_speed = 0.01;     // mean speed threshold [m/s]
  double stall_window = 10.0;    // seconds
  double stall_min_distance = 1.0;
};

/// Runs one initial state of the scenario (deterministic).
RunResult run_single(const Scenario& scenario, const ctl::ControlParams& params,
                     int initial_state_index, const SimOptions& options = {});

/// All initial states; optionally across OpenMP threads (results identical).
std::vector<RunResult> run_scenario(const Scenario& scenario, const ctl::ControlParams& params,
                                    const SimOptions& options = {}, bool parallel = false);

}  // namespace nav2d::sim
