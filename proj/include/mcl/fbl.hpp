#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "mcl/pendulum.hpp"
#include "mcl/trajectory.hpp"

namespace mcl {

struct NotHurwitz : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exponential envelope ||e^{A_cl t}|| <= M e^{-lambda t}.
struct Envelope {
  double M;
  double lambda;
};

/// Feedback-linearization gains; K elementwise positive so the error system
/// edot = A_cl e with A_cl = [[0,1],[-K1,-K2]] is Hurwitz.
struct FBLGains {
  double K1 = 4.0;
  double K2 = 4.0;

  Eigen::Matrix2d a_cl() const {
    Eigen::Matrix2d a;
    a << 0.0, 1.0, -K1, -K2;
    return a;
  }
};

struct FBLCommand {
  double torque = 0.0;
  bool expired = false;  // playback time ran past the trajectory horizon
};

/// Tracking control: u = m L^2 (-(g_c/L) sin theta + theta_ddot_d(t)
/// - K1 (theta - theta_d(t)) - K2 (theta_dot - theta_dot_d(t))), applied as
/// a zero-order hold until the next low-level tick. Past the horizon the
/// last setpoint is held and the command is flagged.
FBLCommand fbl_control(const State& x, const Trajectory& traj,
                       double t_since_upd, const FBLGains& gains,
                       const PendulumParams& plant);

/// 2x2 matrix exponential (closed form via eigenstructure).
Eigen::Matrix2d expm2(const Eigen::Matrix2d& a, double t);

/// Envelope constants for A_cl: lambda = 0.95 * |max Re eig| and
/// M = sup_t ||e^{A_cl t}|| e^{lambda t} on a grid with a decay-checked tail.
/// Throws NotHurwitz when some eigenvalue has Re >= 0.
Envelope gains_to_envelope(const FBLGains& gains);

}  // namespace mcl
