#pragma once

#include <cmath>

#include "nav2d/geometry/types.hpp"

namespace nav2d::sim {

/// Unicycle state x = [p^x, p^y, psi], psi wrapped to (-pi, pi].
struct UnicycleState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;

  geom::Point2 position() const { return {x, y}; }
};

/// Input u = [v, omega]: linear and angular velocity.
struct Input {
  double v = 0.0;
  double omega = 0.0;
};

/// Box input constraints U = [v_min, v_max] x [-omega_max, omega_max].
struct InputBounds {
  double v_min = -0.1;
  double v_max = 1.0;
  double omega_max = 1.0;

  bool contains(const Input& u, double tol = 1e-9) const {
    return u.v >= v_min - tol && u.v <= v_max + tol && std::abs(u.omega) <= omega_max + tol;
  }
  Input clamp(const Input& u) const {
    return {std::clamp(u.v, v_min, v_max), std::clamp(u.omega, -omega_max, omega_max)};
  }
  /// Maximum linear speed over X x U (w^max for the path dynamics).
  double w_max() const { return std::max(v_max, -v_min); }
};

inline double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

/// One RK4 step of the kinematics xdot = [v cos psi, v sin psi, omega].
UnicycleState rk4_step(const UnicycleState& state, const Input& input, double h);

}  // namespace nav2d::sim
