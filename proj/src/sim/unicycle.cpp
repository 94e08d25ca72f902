#include "nav2d/sim/unicycle.hpp"

namespace nav2d::sim {

namespace {

struct Deriv {
  double dx, dy, dpsi;
};

Deriv f(const UnicycleState& s, const Input& u) {
  return {u.v * std::cos(s.psi), u.v * std::sin(s.psi), u.omega};
}

UnicycleState advance(const UnicycleState& s, const Deriv& d, double h) {
  return {s.x + h * d.dx, s.y + h * d.dy, s.psi + h * d.dpsi};
}

}  // namespace

UnicycleState rk4_step(const UnicycleState& state, const Input& input, double h) {
  const Deriv k1 = f(state, input);
  const Deriv k2 = f(advance(state, k1, 0.5 * h), input);
  const Deriv k3 = f(advance(state, k2, 0.5 * h), input);
  const Deriv k4 = f(advance(state, k3, h), input);
  UnicycleState out{
      state.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
      state.y + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy),
      state.psi + h / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi),
  };
  out.psi = wrap_angle(out.psi);
  return out;
}

}  // namespace nav2d::sim
