#include "mcl/mpc.hpp"

#include <cmath>

namespace mcl {

void discretize_upright(const PendulumParams& plant, double dt,
                        Eigen::Matrix2d& A_d, Eigen::Vector2d& B_d) {
  const double a = plant.g_c / plant.L;  // theta_ddot = a*theta + b*u
  const double b = 1.0 / plant.inertia();
  const double w = std::sqrt(a);
  const double c = std::cosh(w * dt);
  const double s = std::sinh(w * dt);
  A_d << c, s / w, w * s, c;
  B_d << b * (c - 1.0) / a, b * s / w;
}

Eigen::Matrix2d dare(const Eigen::Matrix2d& A, const Eigen::Vector2d& B,
                     const Eigen::Matrix2d& Q, double R) {
  Eigen::Matrix2d P = Q;
  for (int it = 0; it < 10000; ++it) {
    const double denom = R + B.dot(P * B);
    const Eigen::Vector2d K = (A.transpose() * P * B) / denom;
    const Eigen::Matrix2d next =
        Q + A.transpose() * P * A - K * denom * K.transpose();
    if ((next - P).cwiseAbs().maxCoeff() < 1e-13) return next;
    P = next;
  }
  return P;
}

double planning_input_bound(const PendulumParams& plant) {
  // Tracking the planned reference exactly costs
  // u_ff = u_plan + m L^2 (g_c/L)(theta - sin theta); leave that margin.
  const double ff_gap = plant.inertia() * (plant.g_c / plant.L) *
                        (plant.theta_max - std::sin(plant.theta_max));
  return plant.U - ff_gap - 0.05;
}

MPCController::MPCController(const MPCConfig& cfg, const PendulumParams& plant)
    : cfg_(cfg), plant_(plant) {
  discretize_upright(plant, cfg.dt(), A_d_, B_d_);

  u_plan_ = mcl::planning_input_bound(plant);
  if (u_plan_ <= 0.0)
    throw std::runtime_error("MPC: no input authority after margins");

  const Eigen::Matrix2d Qm = cfg.Q.asDiagonal();
  P_cost_ = dare(A_d_, B_d_, Qm, cfg.R);

  const int N = cfg.N;
  const int n = 2 + N;  // z = (x0, u_0..u_{N-1})
  // Prediction rows M_k with x_k = M_k z.
  predict_.resize(static_cast<std::size_t>(N) + 1);
  Eigen::Matrix2d Ak = Eigen::Matrix2d::Identity();
  for (int k = 0; k <= N; ++k) {
    Eigen::Matrix<double, 2, Eigen::Dynamic> M(2, n);
    M.setZero();
    M.leftCols<2>() = Ak;
    // columns for u_j: A^{k-1-j} B
    Eigen::Matrix2d Aj = Eigen::Matrix2d::Identity();
    for (int j = k - 1; j >= 0; --j) {
      M.col(2 + j) = Aj * B_d_;
      Aj = A_d_ * Aj;
    }
    predict_[static_cast<std::size_t>(k)] = M;
    Ak = A_d_ * Ak;
  }

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < N; ++k) {
    const auto& M = predict_[static_cast<std::size_t>(k)];
    P += 2.0 * M.transpose() * Qm * M;
    P(2 + k, 2 + k) += 2.0 * cfg.R;
  }

  // Rows: x0 box (2), states 1..N-1 (2 each), terminal equality (2),
  // inputs (N).
  const int m = 2 + 2 * (N - 1) + 2 + N;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, n);
  int row = 0;
  C(row, 0) = 1.0;
  C(row + 1, 1) = 1.0;
  row += 2;
  for (int k = 1; k < N; ++k) {
    C.block(row, 0, 2, n) = predict_[static_cast<std::size_t>(k)];
    row += 2;
  }
  C.block(row, 0, 2, n) = predict_[static_cast<std::size_t>(N)];
  row += 2;
  for (int k = 0; k < N; ++k) C(row++, 2 + k) = 1.0;

  QPSettings qs;
  qs.eps = cfg.eps_qp;
  qs.max_iter = cfg.max_iter;
  solver_ = std::make_unique<QPSolver>(std::move(P), std::move(C), qs);
}

MPCResult MPCController::solve(const State& estimate) const {
  MPCResult out;
  if (!estimate.allFinite()) return out;

  const int N = cfg_.N;
  const int n = 2 + N;
  const int m = 2 + 2 * (N - 1) + 2 + N;
  const Eigen::Vector2d box(plant_.theta_max * cfg_.state_margin,
                            plant_.omega_max * cfg_.state_margin);

  Eigen::VectorXd lo(m), hi(m);
  int row = 0;
  for (int i = 0; i < 2; ++i) {
    const double l = std::max(estimate(i) - cfg_.initial_set_radius(i), -box(i));
    const double h = std::min(estimate(i) + cfg_.initial_set_radius(i), box(i));
    if (l > h) return out;  // empty initial set against the state box
    lo(row) = l;
    hi(row) = h;
    ++row;
  }
  for (int k = 1; k < N; ++k) {
    lo.segment<2>(row) = -box;
    hi.segment<2>(row) = box;
    row += 2;
  }
  lo.segment<2>(row).setZero();  // terminal equality x_N = 0
  hi.segment<2>(row).setZero();
  row += 2;
  for (int k = 0; k < N; ++k) {
    lo(row) = -u_plan_;
    hi(row) = u_plan_;
    ++row;
  }

  const Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  QPSolution sol = solver_->solve(q, lo, hi);
  if (sol.status == QPStatus::Infeasible) {
    out.qp = std::move(sol);  // diagnostics survive
    return out;
  }

  out.qp = std::move(sol);
  out.feasible = true;
  out.knots.reserve(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k)
    out.knots.push_back(predict_[static_cast<std::size_t>(k)] * out.qp.x);
  out.trajectory = Trajectory::fit_knots(out.knots, cfg_.dt());
  const Eigen::Vector2d x0 = out.knots.front();
  out.start_cost = x0.dot(P_cost_ * x0);
  return out;
}

State estimate(const State& truth, double noise_bound, Rng& rng) {
  const double ang = 2.0 * M_PI * rng.next_unit();
  const double rad = noise_bound * std::sqrt(rng.next_unit());
  State eta(rad * std::cos(ang), rad * std::sin(ang));
  const double norm = eta.norm();
  if (norm > noise_bound && norm > 0.0) eta *= noise_bound / norm;
  return truth + eta;
}

}  // namespace mcl
