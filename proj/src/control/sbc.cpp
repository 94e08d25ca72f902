#include "nav2d/control/sbc.hpp"

#include <cmath>

namespace nav2d::ctl {

void SbcGains::validate(double rho_bar) const {
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw InvalidProblem("SBC gains must be positive");
  const double k1_bound =
      std::min(-input_bounds.v_min, input_bounds.v_max) / (2.0 * rho_bar);
  if (k1 > k1_bound + 1e-12) throw InvalidProblem("k1 exceeds the saturation bound");
  if (k2 > input_bounds.omega_max / M_PI + 1e-12) {
    throw InvalidProblem("k2 exceeds the saturation bound");
  }
}

sim::Input sbc_unicycle(const sim::UnicycleState& x, const geom::Point2& target,
                        const SbcGains& gains) {
  const double ex = x.x - target.x;
  const double ey = x.y - target.y;
  if (std::hypot(ex, ey) < 1e-4) return {0.0, 0.0};
  const double v = -gains.k1 * (ex * std::cos(x.psi) + ey * std::sin(x.psi));
  const double e_psi = sim::wrap_angle(std::atan2(ey, ex) - x.psi + M_PI);
  const double omega = gains.k2 * e_psi;
  // Validated gains keep the raw law inside U whenever |e| <= rho_bar, the
  // regime the scheduler guarantees.
  return {v, omega};
}

}  // namespace nav2d::ctl
