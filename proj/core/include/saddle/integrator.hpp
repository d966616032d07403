#pragma once

namespace saddle {

/// Classical fourth-order Runge-Kutta step for any vector-space state type
/// (Eigen matrices, or anything with + and scalar *).
template <class State, class Rhs>
State rk4_step(const State& y, double t, double dt, Rhs&& f) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
  const State k3 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
  const State k4 = f(t + dt, State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace saddle
