#include "nav2d/control/controller.hpp"

namespace nav2d::ctl {

ScheduleResult schedule(const mpc::MpcSolution& solution, const ds::Rhrp& rhrp,
                        const geom::Point2& r0, const geom::Point2& rg, const SbcGains& gains,
                        double dt) {
  ScheduleResult out;
  const bool singleton = rhrp.is_singleton() || geom::distance(r0, rg) <= geom::kGeomTol;
  if (!singleton && solution.feasible) {
    out.mode = Mode::Mpc;
    out.law.mode = Mode::Mpc;
    out.law.constant_input = solution.inputs.front();
    out.law.sbc_gains = gains;
    // 1-step predicted reference position.
    out.r_plus = rhrp.eval(std::min(solution.path_speeds.front() * dt, rhrp.length()));
  } else {
    out.mode = Mode::Sbc;
    out.law.mode = Mode::Sbc;
    out.law.sbc_target = r0;
    out.law.sbc_gains = gains;
    out.r_plus = r0;  // no forward shift
  }
  return out;
}

star::StarWorld update_cache(const star::EnvModResult& result) {
  if (result.is_dsw) return result.star_world;
  star::StarWorld nominal;
  nominal.workspace_rho = result.workspace_rho_bar;
  nominal.rho = result.star_world.rho;
  return nominal;
}

}  // namespace nav2d::ctl
