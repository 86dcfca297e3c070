#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

namespace mcl {

/// State is (theta, theta_dot); theta = 0 is the unstable upright
/// equilibrium and gravity destabilizes (theta_ddot = (g_c/L) sin theta).
using State = Eigen::Vector2d;

struct PendulumParams {
  double m = 1.0;          // kg
  double L = 1.0;          // m
  double g_c = 9.81;       // m/s^2
  double U = 12.0;         // input torque bound, N*m
  double theta_max = 0.7853981633974483;  // state box: |theta| <= theta_max
  double omega_max = 4.0;                 // |theta_dot| <= omega_max

  double inertia() const { return m * L * L; }
  bool in_state_box(const State& x) const {
    return std::abs(x(0)) <= theta_max && std::abs(x(1)) <= omega_max;
  }
};

struct LipschitzConstants {
  double L_f;  // drift Lipschitz bound over the state box
  double L_g;  // actuation Lipschitz bound (0: g is constant)
  double G;    // sup ||g(x)||
};

struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Control-affine split xdot = f(x) + g(x) u.
std::pair<State, State> drift_and_actuation(const State& x,
                                            const PendulumParams& p);

/// One RK4 step with the input saturated to [-U, U]. `saturated`, when
/// given, reports whether saturation clipped the command.
State step(const State& x, double u, double h, const PendulumParams& p,
           bool* saturated = nullptr);

LipschitzConstants lipschitz_constants(const PendulumParams& p);

/// sup ||f + g u|| over the state box and |u| <= U; the derived bounded-
/// variation constant D_x of the true state.
double state_speed_bound(const PendulumParams& p);

/// Pendulum energy about the pivot (for integrator tests).
double energy(const State& x, const PendulumParams& p);

}  // namespace mcl
