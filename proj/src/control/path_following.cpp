#include <cmath>

#include "nav2d/control/controller.hpp"
#include "nav2d/geometry/boolean.hpp"

namespace nav2d::ctl {

using geom::Point2;
using geom::PolyList;
using geom::Region;

namespace {

double saturate(double v, double lb, double ub) { return std::max(lb, std::min(ub, v)); }

// Membership in F^rho via the inflated sets (conservative: boundary fails).
bool tunnel_point_free(const Point2& q, const Region& workspace_rho,
                       const PolyList& obstacles_rho) {
  if (!workspace_rho.contains(q, 0.0)) return false;
  for (const auto& o : obstacles_rho) {
    if (o.contains(q, 0.0)) return false;
  }
  return true;
}

}  // namespace

ds::Rhrp nominal_rhrp(const Point2& r_plus, double theta, const ReferencePath& path,
                      double l_nom, double rho, double spacing) {
  const Point2 anchor = path.eval(theta);
  const double l_len = geom::distance(r_plus, anchor);

  std::vector<ds::RhrpSample> samples;
  samples.reserve(static_cast<std::size_t>(l_nom / spacing) + 4);
  std::vector<double> hints;

  // Segment l[r_plus, gamma(theta)] as a convex combination in s/|l|.
  if (l_len > 1e-12) {
    const int k = std::max(1, static_cast<int>(std::ceil(l_len / spacing)));
    for (int i = 0; i < k; ++i) {
      const double s = l_len * i / k;
      samples.push_back({s, r_plus + (anchor - r_plus) * (s / l_len)});
    }
    hints.push_back(l_len);
  }
  // gamma(theta^nom(s)) for s >= |l|, theta^nom = sat(theta + s - |l|, theta, theta_g).
  const int m = std::max(1, static_cast<int>(std::ceil((l_nom - l_len) / spacing)));
  for (int i = 0; i <= m; ++i) {
    const double s = l_len + (l_nom - l_len) * i / m;
    const double th = saturate(theta + s - l_len, theta, path.theta_g());
    samples.push_back({s, path.eval(th)});
  }
  // Saturation at theta_g introduces a second corner.
  const double sat_s = l_len + (path.theta_g() - theta);
  if (sat_s < l_nom - 1e-9) hints.push_back(sat_s);

  // Collapse duplicate arc positions (saturated tail keeps s increasing but
  // the point constant; keep samples strictly increasing in s).
  std::vector<ds::RhrpSample> unique_samples;
  for (const auto& sample : samples) {
    if (unique_samples.empty() || sample.s > unique_samples.back().s + 1e-12) {
      unique_samples.push_back(sample);
    }
  }
  return ds::Rhrp::from_samples(std::move(unique_samples), rho, path.eval(path.theta_g()),
                                std::move(hints));
}

PathFollowingController::PathFollowingController(ControlParams params, ReferencePath path)
    : params_(std::move(params)), path_(std::move(path)) {
  params_.validate();
  if (params_.l_nom < params_.mpc.reference_length()) {
    throw InvalidProblem("L_nom must be at least L = T w_max");
  }
}

ControlLaw PathFollowingController::step(const star::Environment& env,
                                         const sim::UnicycleState& x) {
  const Point2 p = x.position();
  if (first_) {
    r_plus_ = p;
    theta_ = 0.0;
    first_ = false;
  }

  double rho = params_.env.rho_bar;
  const Region workspace_rho = geom::erode_workspace(env.workspace, rho);
  PolyList obstacles_rho;
  obstacles_rho.reserve(env.obstacles.size());
  for (const auto& o : env.obstacles) obstacles_rho.push_back(geom::inflate(o, rho));

  // Lines 2-3: nominal RHRP and its tunnel clearance check.
  ds::Rhrp nominal = nominal_rhrp(r_plus_, theta_, path_, params_.l_nom, rho);
  bool nominal_ok = true;
  for (const auto& sample : nominal.samples()) {
    if (!tunnel_point_free(sample.r, workspace_rho, obstacles_rho)) {
      nominal_ok = false;
      break;
    }
  }

  ds::Rhrp rhrp;
  Point2 r0, rg;
  bool blocked = false;
  std::optional<star::EnvModResult> mod;

  if (nominal_ok) {
    // Truncate to the MPC reference length L (the clearance was checked over
    // the full nominal horizon).
    const double L = std::min(params_.mpc.reference_length(), nominal.length());
    std::vector<ds::RhrpSample> head;
    for (const auto& sample : nominal.samples()) {
      if (sample.s <= L + 1e-12) head.push_back(sample);
    }
    std::vector<double> hints;
    for (double h : nominal.break_hints()) {
      if (h < L - 1e-9) hints.push_back(h);
    }
    rhrp = ds::Rhrp::from_samples(std::move(head), rho, nominal.goal(), std::move(hints));
    if (!rhrp.is_singleton()) ds::fit_polynomial(rhrp);
    r0 = rhrp.samples().front().r;
    rg = path_.eval(path_.theta_g());
  } else {
    // Line 6: advance theta to the first collision-free position on the
    // remaining path, stepping then bisecting.
    const double l_len = geom::distance(r_plus_, path_.eval(theta_));
    const double start = saturate(theta_ + params_.l_nom - l_len, theta_, path_.theta_g());
    double found = -1.0;
    double prev_blocked = start;
    for (double s = start; s <= path_.theta_g() + 1e-12; s += 1e-3) {
      const double sc = std::min(s, path_.theta_g());
      if (tunnel_point_free(path_.eval(sc), workspace_rho, obstacles_rho)) {
        found = sc;
        break;
      }
      prev_blocked = sc;
      if (sc >= path_.theta_g()) break;
    }
    if (found < 0.0) {
      // Path fully blocked: hold via SBC at the current reference and retry.
      blocked = true;
    } else {
      if (found > start) {
        // Bisection refinement to 1e-6 between the last blocked and first
        // free probes.
        double lo = prev_blocked, hi = found;
        while (hi - lo > 1e-6) {
          const double mid = 0.5 * (lo + hi);
          if (tunnel_point_free(path_.eval(mid), workspace_rho, obstacles_rho)) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        found = hi;
      }
      theta_ = found;
      const Point2 local_goal = path_.eval(theta_);
      mod = star::environment_modification(env, p, local_goal, r_plus_,
                                           cache_ ? &*cache_ : nullptr, params_.env);
      cache_ = update_cache(*mod);
      rho = mod->rho;
      r0 = mod->r0;
      rg = mod->rg;
      if (geom::distance(r0, rg) <= geom::kGeomTol) {
        rhrp = ds::Rhrp::singleton(rg, rho);
      } else {
        const ds::ModulationField field(mod->star_world, rg);
        rhrp = ds::integrate_rhrp(field, r0, params_.mpc.reference_length(), rho);
        ds::fit_polynomial(rhrp);
      }
    }
  }

  if (blocked) {
    ControlLaw law;
    law.mode = Mode::Sbc;
    law.sbc_target = r_plus_;
    law.sbc_gains = params_.sbc;
    last_input_ = sbc_unicycle(x, law.sbc_target, params_.sbc);
    warm_.reset();
    diag_ = StepDiagnostics{};
    diag_.mode = Mode::Sbc;
    diag_.rho = rho;
    diag_.r0 = r_plus_;
    diag_.rg = r_plus_;
    diag_.r_plus = r_plus_;
    diag_.theta = theta_;
    diag_.theta_hat = theta_hat_;
    diag_.path_fully_blocked = true;
    diag_.env_obstacles = static_cast<int>(env.obstacles.size());
    return law;
  }

  // Line 8: MPC solve (bypassed for a singleton reference).
  mpc::MpcSolution solution;
  if (!rhrp.is_singleton() && geom::distance(r0, rg) > geom::kGeomTol) {
    mpc::MpcProblem problem;
    problem.initial_state = x;
    problem.rho = rho;
    problem.previous_input = last_input_;
    solution = mpc::solve_tunnel_mpc(problem, rhrp, params_.mpc, warm_ ? &*warm_ : nullptr);
    if (solution.feasible) warm_ = solution;
  }

  // Lines 9-10: path-parameter update, guarded by r+ in B[gamma(theta), rho].
  const bool mpc_mode = !rhrp.is_singleton() &&
                        geom::distance(r0, rg) > geom::kGeomTol && solution.feasible;
  if (mpc_mode && geom::distance(r_plus_, path_.eval(theta_)) <= rho + geom::kGeomTol) {
    theta_ = std::min(theta_ + solution.path_speeds.front() * params_.mpc.dt, path_.theta_g());
  }

  // Line 11: scheduler.
  const ScheduleResult sched =
      schedule(solution, rhrp, r0, rg, params_.sbc, params_.mpc.dt);
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
  diag_.rho = rho;
  diag_.r0 = r0;
  diag_.rg = rg;
  diag_.r_plus = r_plus_;
  diag_.mpc_feasible = solution.feasible;
  diag_.reused_cache = mod ? mod->reused_cached : false;
  diag_.is_dsw = mod ? mod->is_dsw : false;
  diag_.nominal_path_mode = nominal_ok;
  diag_.w0 = solution.feasible ? solution.path_speeds.front() : 0.0;
  diag_.theta = theta_;
  diag_.theta_hat = theta_hat_;
  diag_.mpc_violation = solution.max_violation;
  diag_.mpc_iterations = solution.iterations;
  diag_.env_obstacles = static_cast<int>(env.obstacles.size());
  diag_.star_obstacles = mod ? static_cast<int>(mod->star_world.obstacles.size()) : 0;
  diag_.rhrp = rhrp;
  if (mod) diag_.star_world = mod->star_world;
  return sched.law;
}

}  // namespace nav2d::ctl
