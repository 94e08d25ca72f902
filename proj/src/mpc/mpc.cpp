#include "nav2d/mpc/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nav2d::mpc {

using geom::Point2;
using sim::Input;
using sim::UnicycleState;

namespace {

constexpr double kEpsSmooth = 1e-9;  // smoothing of the |.| cost kink

double sq(double v) { return v * v; }

struct Evaluation {
  double cost = 0.0;
  std::vector<double> constraints;  // g <= 0
  double max_violation() const {
    double m = 0.0;
    for (double g : constraints) m = std::max(m, g);
    return m;
  }
};

// Direct single-shooting transcription over z = [v_i, omega_i, w_i]_{i<N}.
class Transcription {
 public:
  Transcription(const MpcProblem& problem, const ds::Rhrp& rhrp, const MpcParams& params,
                const ObstaclePrediction* prediction, bool tunnel)
      : problem_(problem),
        rhrp_(rhrp),
        params_(params),
        prediction_(prediction),
        tunnel_(tunnel),
        n_(params.horizon),
        substeps_(params.error_subsamples + 1),
        h_(params.dt / (params.error_subsamples + 1)) {}

  int dim() const { return 3 * n_; }

  void bounds(std::vector<double>* lo, std::vector<double>* hi) const {
    lo->assign(dim(), 0.0);
    hi->assign(dim(), 0.0);
    const auto& ub = params_.input_bounds;
    for (int i = 0; i < n_; ++i) {
      (*lo)[3 * i + 0] = ub.v_min;
      (*hi)[3 * i + 0] = ub.v_max;
      (*lo)[3 * i + 1] = -ub.omega_max;
      (*hi)[3 * i + 1] = ub.omega_max;
      (*lo)[3 * i + 2] = 0.0;
      (*hi)[3 * i + 2] = params_.w_max;
    }
    if (tunnel_) {
      // Enforced initial forward motion (7h) as a box bound on w_0.
      (*lo)[2] = std::min(params_.lambda * problem_.rho / params_.dt, params_.w_max);
    }
  }

  Evaluation evaluate(const std::vector<double>& z) const {
    Evaluation ev;
    ev.constraints.reserve(tunnel_ ? n_ * substeps_ + 1 : n_ * substeps_ * 4 + 1);

    UnicycleState state = problem_.initial_state;
    double s = 0.0;
    const double L = rhrp_.length();

    // Input regularization J(z).
    Input prev = problem_.previous_input;
    for (int i = 0; i < n_; ++i) {
      const Input u{z[3 * i], z[3 * i + 1]};
      ev.cost += params_.input_weight[0] * sq(u.v - params_.u_desired.v) +
                 params_.input_weight[1] * sq(u.omega - params_.u_desired.omega);
      ev.cost += params_.input_rate_weight[0] * sq(u.v - prev.v) +
                 params_.input_rate_weight[1] * sq(u.omega - prev.omega);
      prev = u;
    }

    auto tracking_error = [&](double s_query, const UnicycleState& x) {
      const Point2 ref = rhrp_.eval(std::clamp(s_query, 0.0, L));
      const Point2 d = ref - x.position();
      return std::sqrt(d.squared_norm() + kEpsSmooth * kEpsSmooth) - kEpsSmooth;
    };

    double integrand_prev =
        -params_.c_w * z[2] + params_.c_e * tracking_error(0.0, state);
    for (int i = 0; i < n_; ++i) {
      const Input u{z[3 * i], z[3 * i + 1]};
      const double w = z[3 * i + 2];
      for (int m = 1; m <= substeps_; ++m) {
        state = sim::rk4_step(state, u, h_);
        const double s_tau = s + w * (h_ * m);
        const double eps = tracking_error(s_tau, state);
        const double integrand = -params_.c_w * w + params_.c_e * eps;
        ev.cost += 0.5 * (integrand_prev + integrand) * h_;
        integrand_prev = integrand;

        if (tunnel_) {
          ev.constraints.push_back(eps - kTrackingTubeFactor * problem_.rho);
        } else if (prediction_ != nullptr) {
          const Point2 p = state.position();
          for (const PredictedShape& obs : prediction_->per_stage[i]) {
            ev.constraints.push_back(obs.penetration(p));
          }
          if (prediction_->workspace.is_polygon()) {
            const geom::Polygon2& w_poly = prediction_->workspace.poly();
            const double bd = w_poly.boundary_distance(p);
            ev.constraints.push_back(w_poly.contains(p, 0.0) ? -bd : bd);
          }
        }
      }
      s += w * params_.dt;
    }
    ev.constraints.push_back(s - L);  // s(T) <= L
    return ev;
  }

  MpcSolution extract(const std::vector<double>& z) const {
    MpcSolution sol;
    sol.inputs.resize(n_);
    sol.path_speeds.resize(n_);
    sol.predicted_states.assign(1, problem_.initial_state);
    sol.predicted_s.assign(1, 0.0);
    UnicycleState state = problem_.initial_state;
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      sol.inputs[i] = {z[3 * i], z[3 * i + 1]};
      sol.path_speeds[i] = z[3 * i + 2];
      for (int m = 0; m < substeps_; ++m) state = sim::rk4_step(state, sol.inputs[i], h_);
      s += sol.path_speeds[i] * params_.dt;
      sol.predicted_states.push_back(state);
      sol.predicted_s.push_back(s);
    }
    const Evaluation ev = evaluate(z);
    sol.cost = ev.cost;
    sol.max_violation = ev.max_violation();
    sol.feasible = sol.max_violation <= params_.feasibility_tol;
    return sol;
  }

  // Stationary candidate: stop input, single initial path step (tunnel only).
  std::vector<double> stationary_candidate() const {
    std::vector<double> z(dim(), 0.0);
    z[2] = std::min(params_.lambda * problem_.rho / params_.dt, params_.w_max);
    return z;
  }

 private:
  const MpcProblem& problem_;
  const ds::Rhrp& rhrp_;
  const MpcParams& params_;
  const ObstaclePrediction* prediction_;
  bool tunnel_;
  int n_;
  int substeps_;
  double h_;
};

// Augmented-Lagrangian value for inequality constraints (PHR form).
double augmented_value(const Evaluation& ev, const std::vector<double>& mult, double mu) {
  double val = ev.cost;
  for (std::size_t c = 0; c < ev.constraints.size(); ++c) {
    const double t = mult[c] + mu * ev.constraints[c];
    if (t > 0.0) {
      val += (t * t - mult[c] * mult[c]) / (2.0 * mu);
    } else {
      val -= mult[c] * mult[c] / (2.0 * mu);
    }
  }
  return val;
}

struct AlmResult {
  std::vector<double> z;
  int iterations = 0;
  bool budget_exhausted = false;
};

AlmResult alm_minimize(const Transcription& tr, const MpcParams& params,
                       std::vector<double> z0) {
  const int n = tr.dim();
  std::vector<double> lo, hi;
  tr.bounds(&lo, &hi);
  auto project = [&](std::vector<double>& z) {
    for (int i = 0; i < n; ++i) z[i] = std::clamp(z[i], lo[i], hi[i]);
  };
  project(z0);

  const std::size_t n_con = tr.evaluate(z0).constraints.size();
  std::vector<double> mult(n_con, 0.0);
  double mu = 10.0;

  AlmResult result;
  result.z = std::move(z0);

  auto phi = [&](const std::vector<double>& z) {
    return augmented_value(tr.evaluate(z), mult, mu);
  };
  auto grad = [&](const std::vector<double>& z, std::vector<double>* g) {
    std::vector<double> zp = z;
    const double fd = 1e-6;
    for (int i = 0; i < n; ++i) {
      const double orig = zp[i];
      zp[i] = orig + fd;
      const double fp = phi(zp);
      zp[i] = orig - fd;
      const double fm = phi(zp);
      zp[i] = orig;
      (*g)[i] = (fp - fm) / (2.0 * fd);
    }
  };

  double prev_violation = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < params.outer_iterations; ++outer) {
    // Projected gradient descent with Barzilai-Borwein steps.
    std::vector<double> g(n), g_old(n), z_old(n);
    double alpha = 1e-2;
    double f_cur = phi(result.z);
    grad(result.z, &g);
    for (int inner = 0; inner < params.inner_iterations; ++inner) {
      ++result.iterations;
      z_old = result.z;
      g_old = g;
      // Backtracking on the projected step.
      double step = alpha;
      std::vector<double> trial(n);
      double f_trial = 0.0;
      bool accepted = false;
      for (int bt = 0; bt < 25; ++bt) {
        for (int i = 0; i < n; ++i) trial[i] = result.z[i] - step * g[i];
        project(trial);
        f_trial = phi(trial);
        double decrease = 0.0;
        for (int i = 0; i < n; ++i) decrease += (result.z[i] - trial[i]) * g[i];
        if (f_trial <= f_cur - 1e-4 * decrease || decrease <= 1e-16) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      const double move = [&] {
        double m = 0.0;
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(trial[i] - result.z[i]));
        return m;
      }();
      result.z = std::move(trial);
      f_cur = f_trial;
      if (move < 1e-11) break;
      grad(result.z, &g);
      // BB step length from the last displacement pair.
      double sy = 0.0, ss = 0.0;
      for (int i = 0; i < n; ++i) {
        const double si = result.z[i] - z_old[i];
        const double yi = g[i] - g_old[i];
        sy += si * yi;
        ss += si * si;
      }
      alpha = (sy > 1e-16) ? std::clamp(ss / sy, 1e-6, 1e2) : std::min(alpha * 2.0, 1e2);
    }

    const Evaluation ev = tr.evaluate(result.z);
    const double violation = ev.max_violation();
    if (violation <= params.feasibility_tol) break;
    for (std::size_t c = 0; c < n_con; ++c) {
      mult[c] = std::max(0.0, mult[c] + mu * ev.constraints[c]);
    }
    if (violation > 0.25 * prev_violation) mu = std::min(mu * 6.0, 1e8);
    prev_violation = violation;
  }
  return result;
}

std::vector<double> warm_start_vector(const Transcription& tr, const MpcParams& params,
                                      const MpcSolution* warm, const MpcProblem& problem,
                                      bool tunnel) {
  (void)problem;
  const int n = tr.dim();
  std::vector<double> z(n, 0.0);
  const int horizon = params.horizon;
  if (warm != nullptr && static_cast<int>(warm->inputs.size()) == horizon) {
    // Shift by one stage, repeat the tail.
    for (int i = 0; i < horizon; ++i) {
      const int src = std::min(i + 1, horizon - 1);
      z[3 * i] = warm->inputs[src].v;
      z[3 * i + 1] = warm->inputs[src].omega;
      z[3 * i + 2] = warm->path_speeds[src];
    }
  } else {
    // Cold start: steady path-speed tracking guess.
    for (int i = 0; i < horizon; ++i) {
      z[3 * i] = 0.5 * params.input_bounds.v_max;
      z[3 * i + 1] = 0.0;
      z[3 * i + 2] = 0.5 * params.w_max;
    }
  }
  return z;
}

MpcSolution solve_impl(const MpcProblem& problem, const ds::Rhrp& rhrp, const MpcParams& params,
                       const ObstaclePrediction* prediction, bool tunnel,
                       const MpcSolution* warm_start) {
  if (!rhrp.fitted()) throw InvalidProblem("reference path has no polynomial fit");
  if (problem.rho <= 0.0) throw InvalidProblem("clearance must be positive");

  const Transcription tr(problem, rhrp, params, prediction, tunnel);

  std::vector<std::vector<double>> starts;
  starts.push_back(warm_start_vector(tr, params, warm_start, problem, tunnel));
  if (tunnel) starts.push_back(tr.stationary_candidate());
  {
    // Deterministic perturbed starts.
    std::vector<double> z = starts.front();
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += (i % 2 == 0 ? 0.15 : -0.1);
    starts.push_back(std::move(z));
    std::vector<double> z2(tr.dim(), 0.0);
    for (int i = 0; i < params.horizon; ++i) {
      z2[3 * i] = params.input_bounds.v_max;
      z2[3 * i + 2] = params.w_max;
    }
    starts.push_back(std::move(z2));
  }

  MpcSolution best;
  best.cost = std::numeric_limits<double>::infinity();
  best.max_violation = std::numeric_limits<double>::infinity();
  int used = 0;
  int total_iterations = 0;
  for (const auto& start : starts) {
    ++used;
    AlmResult alm = alm_minimize(tr, params, start);
    total_iterations += alm.iterations;
    MpcSolution sol = tr.extract(alm.z);
    const bool better = sol.feasible ? (!best.feasible || sol.cost < best.cost)
                                     : (!best.feasible && sol.max_violation < best.max_violation);
    if (better || best.inputs.empty()) {
      best = std::move(sol);
      best.restarts_used = used - 1;
    }
    if (best.feasible) break;  // accept the first feasible local solution
    if (used > params.restarts) break;
  }
  best.iterations = total_iterations;
  best.budget_exhausted = !best.feasible;

  if (!best.feasible && tunnel) {
    // Validate the infeasibility claim with the stationary candidate.
    const Evaluation ev = tr.evaluate(tr.stationary_candidate());
    if (ev.max_violation() <= params.feasibility_tol) {
      MpcSolution fallback = tr.extract(tr.stationary_candidate());
      fallback.from_fallback_candidate = true;
      fallback.iterations = total_iterations;
      return fallback;
    }
  }
  return best;
}

}  // namespace

void MpcParams::validate(double rho_bar) const {
  if (!(dt > 0.0)) throw InvalidProblem("dt must be positive");
  if (horizon < 1) throw InvalidProblem("N must be at least 1");
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidProblem("lambda must be in (0, 1)");
  if (c_w < 0.0 || c_e < 0.0) throw InvalidProblem("cost weights must be nonnegative");
  if (input_weight[0] < 0.0 || input_weight[1] < 0.0 || input_rate_weight[0] < 0.0 ||
      input_rate_weight[1] < 0.0) {
    throw InvalidProblem("regularization weights must be nonnegative");
  }
  if (lambda * rho_bar > w_max * dt + 1e-12) {
    throw InvalidProblem("lambda * rho_bar <= w_max * dt must be satisfied");
  }
  if (error_subsamples < 0) throw InvalidProblem("error_subsamples must be nonnegative");
}

MpcSolution solve_tunnel_mpc(const MpcProblem& problem, const ds::Rhrp& rhrp,
                             const MpcParams& params, const MpcSolution* warm_start) {
  return solve_impl(problem, rhrp, params, nullptr, true, warm_start);
}

bool feasibility_fallback_check(const MpcProblem& problem, const ds::Rhrp& rhrp,
                                const MpcParams& params) {
  const Transcription tr(problem, rhrp, params, nullptr, true);
  std::vector<double> z(3 * params.horizon, 0.0);
  z[2] = std::min(params.lambda * problem.rho / params.dt, params.w_max);
  return tr.evaluate(z).max_violation() <= params.feasibility_tol;
}

MpcSolution solve_standard_mppfc(const MpcProblem& problem, const ds::Rhrp& rhrp,
                                 const ObstaclePrediction& prediction, const MpcParams& params,
                                 const MpcSolution* warm_start) {
  if (static_cast<int>(prediction.per_stage.size()) < params.horizon) {
    throw InvalidProblem("obstacle predictions must cover every stage");
  }
  return solve_impl(problem, rhrp, params, &prediction, false, warm_start);
}

double max_tracking_error(const MpcProblem& problem, const ds::Rhrp& rhrp,
                          const MpcParams& params, const MpcSolution& solution) {
  const int substeps = params.error_subsamples + 1;
  const double h = params.dt / substeps;
  UnicycleState state = problem.initial_state;
  double s = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < solution.inputs.size(); ++i) {
    for (int m = 1; m <= substeps; ++m) {
      state = sim::rk4_step(state, solution.inputs[i], h);
      const double s_tau = std::clamp(s + solution.path_speeds[i] * h * m, 0.0, rhrp.length());
      worst = std::max(worst, geom::distance(rhrp.eval(s_tau), state.position()));
    }
    s += solution.path_speeds[i] * params.dt;
  }
  return worst;
}

}  // namespace nav2d::mpc
