#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mcl/eval.hpp"
#include "mcl/pendulum.hpp"
#include "mcl/trajectory.hpp"

namespace mcl {

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-ordered cost: 0 exactly on the box E around the goal, otherwise the
/// quantized quadratic cost-to-go ceil(V(p)/q) of the linearized system.
class CostFunction {
 public:
  CostFunction() = default;
  CostFunction(Eigen::Matrix2d cost_to_go, Eigen::Vector2d center,
               Eigen::Vector2d radii, double quantum)
      : P_(std::move(cost_to_go)),
        center_(std::move(center)),
        radii_(std::move(radii)),
        quantum_(quantum) {}

  double value(const Eigen::Vector2d& p) const {
    const Eigen::Vector2d d = p - center_;
    return d.dot(P_ * d);
  }

  /// Membership in the zero-cost box shrunk by `inflation` per axis (exact
  /// Inflate test for an axis-aligned box under the l2 ball).
  bool in_zero_set(const Eigen::Vector2d& p, double inflation = 0.0) const {
    for (int i = 0; i < 2; ++i)
      if (std::abs(p(i) - center_(i)) > radii_(i) - inflation) return false;
    return true;
  }

  std::int64_t cost(const Eigen::Vector2d& p) const {
    if (in_zero_set(p)) return 0;
    return static_cast<std::int64_t>(std::ceil(value(p) / quantum_));
  }

  const Eigen::Vector2d& radii() const { return radii_; }
  const Eigen::Vector2d& center() const { return center_; }
  double quantum() const { return quantum_; }

 private:
  Eigen::Matrix2d P_ = Eigen::Matrix2d::Identity();
  Eigen::Vector2d center_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d radii_ = Eigen::Vector2d::Ones();
  double quantum_ = 1e-2;
};

struct PredCtx {
  const BehaviorView& view;
  const std::string& clock;
  std::int64_t pos;
  const Env& env;
};

/// Named atomic predicate. Signature problems are reported at bind time;
/// evaluation returns a three-valued verdict (Unknown on OutOfTrace reads).
class Predicate {
 public:
  virtual ~Predicate() = default;
  virtual void check_signature(std::size_t nargs, std::size_t nparams,
                               std::vector<std::string>& errors) const = 0;
  virtual Bool3 eval(const LocalFormula& atom, const PredCtx& ctx) const = 0;
};

class PredicateRegistry {
 public:
  void add(std::string name, std::unique_ptr<Predicate> p) {
    preds_[std::move(name)] = std::move(p);
  }
  const Predicate* find(const std::string& name) const {
    auto it = preds_.find(name);
    return it == preds_.end() ? nullptr : it->second.get();
  }

 private:
  std::map<std::string, std::unique_ptr<Predicate>> preds_;
};

/// The contract vocabulary: Close, BoundedVariation, RespectDynamics, Cost,
/// CostZeroInflated. RespectDynamics and the cost predicates take the plant
/// and cost function from this configuration; atom parameters carry the
/// delta/D constants.
PredicateRegistry make_standard_registry(const PendulumParams& plant,
                                         const CostFunction& cost);

// Direct forms (used by the registry and unit-testable on their own).
bool close_points(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  double delta);
bool respect_dynamics(const Trajectory& traj, const PendulumParams& plant,
                      double grid_step);
bool inflate_cost_zero(const CostFunction& cost, const Trajectory& traj,
                       double delta, double grid_step);

}  // namespace mcl
