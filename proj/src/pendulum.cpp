#include "mcl/pendulum.hpp"

#include <cmath>

namespace mcl {

std::pair<State, State> drift_and_actuation(const State& x,
                                            const PendulumParams& p) {
  State f(x(1), (p.g_c / p.L) * std::sin(x(0)));
  State g(0.0, 1.0 / p.inertia());
  return {f, g};
}

namespace {

State deriv(const State& x, double u, const PendulumParams& p) {
  return State(x(1), (p.g_c / p.L) * std::sin(x(0)) + u / p.inertia());
}

}  // namespace

State step(const State& x, double u, double h, const PendulumParams& p,
           bool* saturated) {
  double uc = u;
  if (uc > p.U) uc = p.U;
  if (uc < -p.U) uc = -p.U;
  if (saturated) *saturated = (uc != u);

  const State k1 = deriv(x, uc, p);
  const State k2 = deriv(x + 0.5 * h * k1, uc, p);
  const State k3 = deriv(x + 0.5 * h * k2, uc, p);
  const State k4 = deriv(x + h * k3, uc, p);
  State out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) throw NonFiniteState("integration produced non-finite state");
  return out;
}

LipschitzConstants lipschitz_constants(const PendulumParams& p) {
  // Jacobian of f is [[0,1],[(g_c/L) cos theta, 0]]; |cos| <= 1 over any box,
  // so the spectral bound is max(1, g_c/L) independent of theta_max.
  return {std::max(1.0, p.g_c / p.L), 0.0, 1.0 / p.inertia()};
}

double state_speed_bound(const PendulumParams& p) {
  const double acc = (p.g_c / p.L) * std::sin(p.theta_max) + p.U / p.inertia();
  return std::sqrt(p.omega_max * p.omega_max + acc * acc);
}

double energy(const State& x, const PendulumParams& p) {
  // Kinetic plus potential with the upright position as reference.
  return 0.5 * p.inertia() * x(1) * x(1) + p.m * p.g_c * p.L * (std::cos(x(0)) - 1.0);
}

}  // namespace mcl
