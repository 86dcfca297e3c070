#include "mcl/fbl.hpp"

#include <cmath>

namespace mcl {

FBLCommand fbl_control(const State& x, const Trajectory& traj,
                       double t_since_upd, const FBLGains& gains,
                       const PendulumParams& plant) {
  FBLCommand cmd;
  double t = t_since_upd;
  if (t > traj.horizon()) {
    cmd.expired = true;
    t = traj.horizon();
  }
  if (t < 0.0) t = 0.0;
  const double e1 = x(0) - traj.theta(t);
  const double e2 = x(1) - traj.theta_dot(t);
  cmd.torque = plant.inertia() *
               (-(plant.g_c / plant.L) * std::sin(x(0)) + traj.theta_ddot(t) -
                gains.K1 * e1 - gains.K2 * e2);
  return cmd;
}

Eigen::Matrix2d expm2(const Eigen::Matrix2d& a, double t) {
  const Eigen::Matrix2d at = a * t;
  const double tr = at.trace();
  const double det = at.determinant();
  const double disc = tr * tr / 4.0 - det;
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const double half_tr = tr / 2.0;
  // e^{At} = e^{tr/2} (cosh(s) I + sinh(s)/s (At - tr/2 I)), s^2 = disc.
  double c, sincl;  // cosh(s), sinh(s)/s (analytic at s = 0)
  if (disc > 1e-24) {
    const double s = std::sqrt(disc);
    c = std::cosh(s);
    sincl = std::sinh(s) / s;
  } else if (disc < -1e-24) {
    const double s = std::sqrt(-disc);
    c = std::cos(s);
    sincl = std::sin(s) / s;
  } else {
    c = 1.0;
    sincl = 1.0;
  }
  return std::exp(half_tr) * (c * id + sincl * (at - half_tr * id));
}

namespace {

double spectral_norm(const Eigen::Matrix2d& m) {
  const Eigen::Matrix2d g = m.transpose() * m;
  const double tr = g.trace();
  const double det = g.determinant();
  const double disc = std::max(0.0, tr * tr / 4.0 - det);
  return std::sqrt(std::max(0.0, tr / 2.0 + std::sqrt(disc)));
}

}  // namespace

Envelope gains_to_envelope(const FBLGains& gains) {
  if (!(gains.K1 > 0.0) || !(gains.K2 > 0.0))
    throw NotHurwitz("gains must be elementwise positive");
  const Eigen::Matrix2d a = gains.a_cl();
  // Companion eigenvalues: s = (-K2 +- sqrt(K2^2 - 4 K1)) / 2.
  const double disc = gains.K2 * gains.K2 - 4.0 * gains.K1;
  const double max_re =
      disc >= 0.0 ? (-gains.K2 + std::sqrt(disc)) / 2.0 : -gains.K2 / 2.0;
  if (max_re >= 0.0) throw NotHurwitz("closed-loop matrix is not Hurwitz");

  const double sigma = -max_re;
  const double lambda = sigma * 0.95;

  // Grid sweep of h(t) = ||e^{At}|| e^{lambda t}. Generic Schur bound
  // ||e^{At}|| <= e^{-sigma t}(1 + 2||A|| t) gives the analytic tail.
  const double a_norm = spectral_norm(a);
  const double margin = sigma - lambda;
  const double decreasing_after = std::max(0.0, (2.0 * a_norm - margin) /
                                                    (margin * 2.0 * a_norm));
  const double t_end = std::max(decreasing_after * 1.5, 80.0 / sigma);
  const int steps = 20000;
  double best = 1.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = t_end * static_cast<double>(i) / steps;
    const double h = spectral_norm(expm2(a, t)) * std::exp(lambda * t);
    if (h > best) best = h;
  }
  const double tail = std::exp(-margin * t_end) * (1.0 + 2.0 * a_norm * t_end);
  return {std::max(best, tail), lambda};
}

}  // namespace mcl
