#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace mcl {

enum class QPStatus { Optimal, IterLimit, Infeasible };

struct KKTResiduals {
  double primal = 0.0;  // max constraint violation
  double dual = 0.0;    // ||P x + q + C^T y||_inf
  double comp = 0.0;    // max complementarity defect
  double max_norm() const { return std::max(primal, std::max(dual, comp)); }
};

struct QPSolution {
  QPStatus status = QPStatus::Infeasible;
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // row multipliers (>=0 upper-active, <=0 lower-active)
  double objective = 0.0;
  int iterations = 0;
  bool polished = false;
  KKTResiduals kkt;
};

struct QPSettings {
  double rho = 0.1;
  double rho_eq_scale = 1e3;  // stiffer splitting weight on equality rows
  double sigma = 1e-6;
  double alpha = 1.6;
  double eps = 1e-9;          // primal/dual residual target
  int max_iter = 20000;
  int check_every = 25;
};

/// Dense convex QP  min 1/2 x'Px + q'x  s.t. lo <= Cx <= hi, solved by
/// operator splitting with a terminal active-set polish. Deterministic:
/// fixed iteration order, no randomization, bounded iterations.
class QPSolver {
 public:
  QPSolver(Eigen::MatrixXd P, Eigen::MatrixXd C, QPSettings settings = {});

  QPSolution solve(const Eigen::VectorXd& q, const Eigen::VectorXd& lo,
                   const Eigen::VectorXd& hi) const;

  const Eigen::MatrixXd& P() const { return P_; }
  const Eigen::MatrixXd& C() const { return C_; }

 private:
  KKTResiduals residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& q, const Eigen::VectorXd& lo,
                         const Eigen::VectorXd& hi) const;
  bool polish(const Eigen::VectorXd& q, const Eigen::VectorXd& lo,
              const Eigen::VectorXd& hi, QPSolution& sol) const;

  Eigen::MatrixXd P_;
  Eigen::MatrixXd C_;
  QPSettings st_;
};

}  // namespace mcl
