#include "nav2d/verify/mpc_oracle.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace nav2d::verify {

namespace {

// Independent unicycle RK4 (kept separate from sim::rk4_step by design).
struct State {
  double x, y, psi;
};

State step(const State& s, double v, double om, double h) {
  auto deriv = [&](const State& q) {
    return State{v * std::cos(q.psi), v * std::sin(q.psi), om};
  };
  const State k1 = deriv(s);
  const State k2 = deriv({s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y, s.psi + 0.5 * h * k1.psi});
  const State k3 = deriv({s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y, s.psi + 0.5 * h * k2.psi});
  const State k4 = deriv({s.x + h * k3.x, s.y + h * k3.y, s.psi + h * k3.psi});
  return {s.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
          s.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
          s.psi + h / 6.0 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi)};
}

}  // namespace

GridOracleResult enumerate_tunnel_grid(const mpc::MpcProblem& problem, const ds::Rhrp& rhrp,
                                       const mpc::MpcParams& params) {
  const std::array<double, 4> v_grid{-0.1, 0.0, 0.5, 1.0};
  const std::array<double, 3> om_grid{-1.0, 0.0, 1.0};
  const std::array<double, 3> w_grid{0.0, 0.5, 1.0};
  const int n = params.horizon;
  const int per_stage = static_cast<int>(v_grid.size() * om_grid.size() * w_grid.size());
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= per_stage;

  const int substeps = params.error_subsamples + 1;
  const double h = params.dt / substeps;
  const double w0_min = params.lambda * problem.rho / params.dt;
  const double tube = mpc::kTrackingTubeFactor * problem.rho;
  const double L = rhrp.length();

  GridOracleResult res;
  res.candidates = total;
  res.best_cost = std::numeric_limits<double>::infinity();

  std::vector<int> combo(n, 0);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int i = 0; i < n; ++i) {
      combo[i] = static_cast<int>(rem % per_stage);
      rem /= per_stage;
    }

    bool feasible = true;
    double cost = 0.0;
    State state{problem.initial_state.x, problem.initial_state.y, problem.initial_state.psi};
    double s = 0.0;
    double prev_v = problem.previous_input.v;
    double prev_om = problem.previous_input.omega;
    double integrand_prev =
        -params.c_w * w_grid[(combo[0] / 12) % 3] +
        params.c_e * geom::distance(rhrp.eval(0.0), geom::Point2{state.x, state.y});

    for (int i = 0; i < n && feasible; ++i) {
      const double v = v_grid[combo[i] % 4];
      const double om = om_grid[(combo[i] / 4) % 3];
      const double w = w_grid[(combo[i] / 12) % 3];
      if (i == 0 && w < w0_min - 1e-12) {
        feasible = false;
        break;
      }
      cost += params.input_weight[0] * (v - params.u_desired.v) * (v - params.u_desired.v) +
              params.input_weight[1] * (om - params.u_desired.omega) * (om - params.u_desired.omega);
      cost += params.input_rate_weight[0] * (v - prev_v) * (v - prev_v) +
              params.input_rate_weight[1] * (om - prev_om) * (om - prev_om);
      prev_v = v;
      prev_om = om;

      for (int m = 1; m <= substeps && feasible; ++m) {
        state = step(state, v, om, h);
        const double s_tau = std::min(s + w * h * m, L);
        const double eps =
            geom::distance(rhrp.eval(s_tau), geom::Point2{state.x, state.y});
        const double integrand = -params.c_w * w + params.c_e * eps;
        cost += 0.5 * (integrand_prev + integrand) * h;
        integrand_prev = integrand;
        if (eps > tube + params.feasibility_tol) feasible = false;
      }
      s += w * params.dt;
    }
    if (feasible && s > L + params.feasibility_tol) feasible = false;

    if (feasible) {
      ++res.feasible_candidates;
      res.best_cost = std::min(res.best_cost, cost);
    }
  }
  res.feasible = res.feasible_candidates > 0;
  return res;
}

}  // namespace nav2d::verify
