#pragma once

#include "nav2d/geometry/types.hpp"
#include "nav2d/sim/unicycle.hpp"

namespace nav2d::ctl {

/// Gains for the unicycle stabilizing backup controller. The saturation
/// bounds k1 <= min(-v_min, v_max) / (2 rho_bar) and k2 <= omega_max / pi
/// keep kappa(x, r) inside U for any error up to rho_bar.
struct SbcGains {
  double k1 = 0.15;
  double k2 = 0.3;
  sim::InputBounds input_bounds;

  void validate(double rho_bar) const;
};

/// Backup law kappa(x, r0):
///   v     = -k1 (e^x cos psi + e^y sin psi)
///   omega =  k2 e_psi,  e_psi = wrap(atan2(e^y, e^x) - psi + pi)
/// with e = p - r0. Below 1e-4 m error the stop input is returned (atan2
/// singularity). With validated gains the output lies in U for |e| <= rho_bar.
sim::Input sbc_unicycle(const sim::UnicycleState& x, const geom::Point2& target,
                        const SbcGains& gains);

}  // namespace nav2d::ctl
