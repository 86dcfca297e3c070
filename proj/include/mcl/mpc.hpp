#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "mcl/pendulum.hpp"
#include "mcl/qp.hpp"
#include "mcl/rng.hpp"
#include "mcl/trajectory.hpp"

namespace mcl {

struct MPCConfig {
  double T = 0.8;                      // horizon (s)
  int N = 20;                          // discretization steps
  Eigen::Vector2d Q{10.0, 1.0};        // stage cost diag weights
  double R = 0.1;                      // input weight
  Eigen::Vector2d initial_set_radius{0.01, 0.01};  // x_d(0) in xhat + box
  double eps_qp = 1e-8;
  int max_iter = 20000;
  double state_margin = 0.98;  // planning box shrink inside the plant box

  double dt() const { return T / N; }
};

struct MPCResult {
  bool feasible = false;
  Trajectory trajectory;
  std::vector<Eigen::Vector2d> knots;
  QPSolution qp;
  double start_cost = 0.0;  // V(x_d(0)) under the cost-to-go metric
};

/// Condensed receding-horizon planner over the upright linearization with
/// exact zero-order-hold discretization, terminal equality x_d(T) = 0, and
/// the initial state constrained to a box around the estimate.
class MPCController {
 public:
  MPCController(const MPCConfig& cfg, const PendulumParams& plant);

  MPCResult solve(const State& estimate) const;

  const Eigen::Matrix2d& a_d() const { return A_d_; }
  const Eigen::Vector2d& b_d() const { return B_d_; }
  /// Input box used inside the QP: U minus the feedback-linearization
  /// feedforward margin (the planned trajectory must be trackable with
  /// |u_ff| <= U on the nonlinear plant).
  double planning_input_bound() const { return u_plan_; }
  /// Infinite-horizon cost-to-go matrix of (A_d, B_d, Q, R) (DARE).
  const Eigen::Matrix2d& cost_to_go() const { return P_cost_; }
  const MPCConfig& config() const { return cfg_; }

 private:
  MPCConfig cfg_;
  PendulumParams plant_;
  Eigen::Matrix2d A_d_;
  Eigen::Vector2d B_d_;
  double u_plan_ = 0.0;
  Eigen::Matrix2d P_cost_;
  std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>> predict_;  // M_k
  std::unique_ptr<QPSolver> solver_;
};

/// Exact ZOH discretization of the upright linearization
/// A = [[0,1],[g_c/L,0]], B = [0, 1/(m L^2)] over step dt (closed form).
void discretize_upright(const PendulumParams& plant, double dt,
                        Eigen::Matrix2d& A_d, Eigen::Vector2d& B_d);

/// Discrete algebraic Riccati fixed point for the scalar-input pair.
Eigen::Matrix2d dare(const Eigen::Matrix2d& A, const Eigen::Vector2d& B,
                     const Eigen::Matrix2d& Q, double R);

/// Deterministic bounded-noise estimate: truth plus a draw uniform in the
/// disk of radius `noise_bound` (clipped defensively).
State estimate(const State& truth, double noise_bound, Rng& rng);

/// Planner input box: U minus the worst feedforward gap between the
/// linearized plan and exact tracking of it on the nonlinear plant.
double planning_input_bound(const PendulumParams& plant);

}  // namespace mcl
