#include "mcl/qp.hpp"

#include <vector>

namespace mcl {

QPSolver::QPSolver(Eigen::MatrixXd P, Eigen::MatrixXd C, QPSettings settings)
    : P_(std::move(P)), C_(std::move(C)), st_(settings) {}

namespace {

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

KKTResiduals QPSolver::residuals(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi) const {
  KKTResiduals r;
  const Eigen::VectorXd cx = C_ * x;
  for (Eigen::Index i = 0; i < cx.size(); ++i) {
    const double viol = std::max(std::max(lo(i) - cx(i), cx(i) - hi(i)), 0.0);
    r.primal = std::max(r.primal, viol);
    if (y(i) > 0.0) r.comp = std::max(r.comp, y(i) * std::abs(hi(i) - cx(i)));
    if (y(i) < 0.0) r.comp = std::max(r.comp, -y(i) * std::abs(cx(i) - lo(i)));
  }
  r.dual = inf_norm(P_ * x + q + C_.transpose() * y);
  return r;
}

bool QPSolver::polish(const Eigen::VectorXd& q, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi, QPSolution& sol) const {
  const Eigen::Index n = P_.rows();
  const Eigen::Index m = C_.rows();
  const double act_tol = 1e-7;

  const Eigen::VectorXd cx = C_ * sol.x;
  std::vector<Eigen::Index> active;
  std::vector<int> side(static_cast<std::size_t>(m), 0);  // -1 lower, +1 upper
  for (Eigen::Index i = 0; i < m; ++i) {
    if (lo(i) == hi(i)) {
      active.push_back(i);
      side[static_cast<std::size_t>(i)] = 2;  // equality
    } else if (cx(i) - lo(i) < act_tol || sol.y(i) < -act_tol) {
      active.push_back(i);
      side[static_cast<std::size_t>(i)] = -1;
    } else if (hi(i) - cx(i) < act_tol || sol.y(i) > act_tol) {
      active.push_back(i);
      side[static_cast<std::size_t>(i)] = 1;
    }
  }

  // Equality-constrained solve on the detected set; drop wrong-signed
  // multipliers and retry (bounded loop, deterministic order).
  for (int round = 0; round < 40; ++round) {
    const Eigen::Index ma = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + ma, n + ma);
    kkt.topLeftCorner(n, n) = P_;
    kkt.topLeftCorner(n, n).diagonal().array() += 1e-12;
    Eigen::VectorXd rhs(n + ma);
    rhs.head(n) = -q;
    for (Eigen::Index a = 0; a < ma; ++a) {
      const Eigen::Index row = active[static_cast<std::size_t>(a)];
      kkt.block(n + a, 0, 1, n) = C_.row(row);
      kkt.block(0, n + a, n, 1) = C_.row(row).transpose();
      rhs(n + a) =
          side[static_cast<std::size_t>(row)] == -1 ? lo(row) : hi(row);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) return false;
    Eigen::VectorXd z = lu.solve(rhs);
    z += lu.solve(rhs - kkt * z);  // one refinement pass

    Eigen::VectorXd x = z.head(n);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    bool sign_ok = true;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index a = 0; a < ma; ++a) {
      const Eigen::Index row = active[static_cast<std::size_t>(a)];
      const double nu = z(n + a);
      const int s = side[static_cast<std::size_t>(row)];
      y(row) = nu;
      if (s == 2 || (s == 1 && nu >= -1e-9) || (s == -1 && nu <= 1e-9)) {
        keep.push_back(row);
      } else {
        sign_ok = false;
      }
    }
    if (sign_ok) {
      const KKTResiduals res = residuals(x, y, q, lo, hi);
      if (res.primal <= 1e-7 && res.dual <= 1e-7) {
        sol.x = std::move(x);
        sol.y = std::move(y);
        sol.kkt = res;
        sol.polished = true;
        sol.objective = 0.5 * sol.x.dot(P_ * sol.x) + q.dot(sol.x);
        return true;
      }
      return false;
    }
    active = std::move(keep);
  }
  return false;
}

QPSolution QPSolver::solve(const Eigen::VectorXd& q, const Eigen::VectorXd& lo,
                           const Eigen::VectorXd& hi) const {
  const Eigen::Index n = P_.rows();
  const Eigen::Index m = C_.rows();
  QPSolution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  sol.y = Eigen::VectorXd::Zero(m);

  // Ruiz equilibration of the stacked (P, C) columns and C rows.
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd e = Eigen::VectorXd::Ones(m);
  {
    Eigen::MatrixXd Ps = P_;
    Eigen::MatrixXd Cs = C_;
    for (int it = 0; it < 15; ++it) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double cn = std::max(Ps.col(j).cwiseAbs().maxCoeff(),
                                   Cs.col(j).cwiseAbs().maxCoeff());
        const double s = cn > 1e-12 ? 1.0 / std::sqrt(cn) : 1.0;
        d(j) *= s;
        Ps.col(j) *= s;
        Ps.row(j) *= s;
        Cs.col(j) *= s;
      }
      for (Eigen::Index i = 0; i < m; ++i) {
        const double rn = Cs.row(i).cwiseAbs().maxCoeff();
        const double s = rn > 1e-12 ? 1.0 / std::sqrt(rn) : 1.0;
        e(i) *= s;
        Cs.row(i) *= s;
      }
    }
  }
  const Eigen::MatrixXd Ps = d.asDiagonal() * P_ * d.asDiagonal();
  const Eigen::MatrixXd Cs = e.asDiagonal() * C_ * d.asDiagonal();
  const Eigen::VectorXd qs = d.asDiagonal() * q;
  const Eigen::VectorXd los = e.asDiagonal() * lo;
  const Eigen::VectorXd his = e.asDiagonal() * hi;

  double rho = st_.rho;
  auto rho_vec = [&](double base) {
    Eigen::VectorXd rv(m);
    for (Eigen::Index i = 0; i < m; ++i)
      rv(i) = lo(i) == hi(i) ? base * st_.rho_eq_scale : base;
    return rv;
  };

  Eigen::VectorXd rho_r = rho_vec(rho);
  Eigen::MatrixXd kkt_m = Ps;
  kkt_m.diagonal().array() += st_.sigma;
  kkt_m += Cs.transpose() * rho_r.asDiagonal() * Cs;
  Eigen::LDLT<Eigen::MatrixXd> fact(kkt_m);
  if (fact.info() != Eigen::Success) {
    sol.status = QPStatus::Infeasible;
    return sol;
  }

  Eigen::VectorXd xs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);  // split copy of Cs*xs
  Eigen::VectorXd ys = Eigen::VectorXd::Zero(m);

  auto unscale = [&](QPSolution& s) {
    s.x = d.asDiagonal() * xs;
    s.y = e.asDiagonal() * ys;
    s.kkt = residuals(s.x, s.y, q, lo, hi);
    s.objective = 0.5 * s.x.dot(P_ * s.x) + q.dot(s.x);
  };

  int it = 0;
  for (; it < st_.max_iter; ++it) {
    const Eigen::VectorXd rhs =
        st_.sigma * xs - qs + Cs.transpose() * (rho_r.asDiagonal() * w - ys);
    const Eigen::VectorXd xt = fact.solve(rhs);
    const Eigen::VectorXd cxt = Cs * xt;
    const Eigen::VectorXd x_next = st_.alpha * xt + (1.0 - st_.alpha) * xs;
    Eigen::VectorXd w_arg = st_.alpha * cxt + (1.0 - st_.alpha) * w +
                            rho_r.cwiseInverse().cwiseProduct(ys);
    Eigen::VectorXd w_next = w_arg.cwiseMax(los).cwiseMin(his);
    ys += rho_r.cwiseProduct(st_.alpha * cxt + (1.0 - st_.alpha) * w - w_next);
    xs = x_next;
    w = w_next;

    if ((it + 1) % st_.check_every == 0) {
      unscale(sol);
      if (sol.kkt.primal < st_.eps && sol.kkt.dual < st_.eps) {
        ++it;
        break;
      }
      // try an early polish once the iterate is in the basin
      if (sol.kkt.primal < 1e-4 && (it + 1) % (st_.check_every * 10) == 0) {
        QPSolution trial = sol;
        if (polish(q, lo, hi, trial)) {
          trial.status = QPStatus::Optimal;
          trial.iterations = it + 1;
          return trial;
        }
      }
      // adaptive splitting weight (scaled residual balance)
      const double rp = inf_norm(Cs * xs - w);
      const double rd =
          inf_norm(Ps * xs + qs + Cs.transpose() * ys);
      if (rp > 1e-30 && rd > 1e-30) {
        const double ratio = std::sqrt(rp / rd);
        if (ratio > 5.0 || ratio < 0.2) {
          rho = std::clamp(rho * ratio, 1e-6, 1e6);
          rho_r = rho_vec(rho);
          Eigen::MatrixXd km = Ps;
          km.diagonal().array() += st_.sigma;
          km += Cs.transpose() * rho_r.asDiagonal() * Cs;
          fact.compute(km);
        }
      }
    }
  }

  unscale(sol);
  sol.iterations = it;

  const bool converged = sol.kkt.primal <= 1e-6 && sol.kkt.dual <= 1e-6;
  if (polish(q, lo, hi, sol)) {
    sol.status = QPStatus::Optimal;
    sol.iterations = it;
    return sol;
  }
  if (converged) {
    sol.status = QPStatus::Optimal;
    return sol;
  }
  // No certificate machinery: a stalled primal residual is reported as
  // (certificate-free) infeasibility, anything else as the iteration limit.
  sol.status = sol.kkt.primal > 1e-4 ? QPStatus::Infeasible
                                     : QPStatus::IterLimit;
  return sol;
}

}  // namespace mcl
