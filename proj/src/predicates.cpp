#include "mcl/predicates.hpp"

#include <cmath>

namespace mcl {

bool close_points(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  double delta) {
  if (a.size() != b.size())
    throw DimensionMismatch("Close: arguments of dimension " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  return (a - b).norm() <= delta;
}

bool respect_dynamics(const Trajectory& traj, const PendulumParams& plant,
                      double grid_step) {
  if (traj.empty()) return true;
  const double tol = 1e-9;
  const double horizon = traj.horizon();
  const std::int64_t n =
      static_cast<std::int64_t>(std::floor(horizon / grid_step + 0.5));
  for (std::int64_t k = 0; k <= n; ++k) {
    const double t = std::min(static_cast<double>(k) * grid_step, horizon);
    const double th = traj.theta(t);
    const double w = traj.theta_dot(t);
    if (std::abs(th) > plant.theta_max + tol) return false;
    if (std::abs(w) > plant.omega_max + tol) return false;
    // Feedforward of the exact-tracking input for this reference.
    const double u_ff =
        plant.inertia() *
        (-(plant.g_c / plant.L) * std::sin(th) + traj.theta_ddot(t));
    if (std::abs(u_ff) > plant.U + tol) return false;
  }
  return true;
}

bool inflate_cost_zero(const CostFunction& cost, const Trajectory& traj,
                       double delta, double grid_step) {
  if (traj.empty()) return false;
  const double tol = 1e-9;
  const double horizon = traj.horizon();
  const std::int64_t n =
      static_cast<std::int64_t>(std::floor(horizon / grid_step + 0.5));
  for (std::int64_t k = 0; k <= n; ++k) {
    const double t = std::min(static_cast<double>(k) * grid_step, horizon);
    const Eigen::Vector2d p = traj.state(t);
    for (int i = 0; i < 2; ++i)
      if (std::abs(p(i) - cost.center()(i)) > cost.radii()(i) - delta + tol)
        return false;
  }
  return true;
}

namespace {

Eigen::VectorXd as_vector(const TermValue& v, const char* pred) {
  if (std::holds_alternative<double>(v)) {
    Eigen::VectorXd out(1);
    out(0) = std::get<double>(v);
    return out;
  }
  if (std::holds_alternative<Eigen::VectorXd>(v))
    return std::get<Eigen::VectorXd>(v);
  throw BindError(std::string(pred) + ": trajectory argument where a point was expected");
}

struct ParamEval {
  bool ok = false;
  double value = 0.0;
};

ParamEval scalar_param(const LocalFormula& atom, std::size_t i,
                       const PredCtx& ctx) {
  const TermEval e =
      eval_term(atom.params[i], ctx.view, ctx.clock, ctx.pos, ctx.env);
  if (!e.ok()) return {};
  if (!std::holds_alternative<double>(e.value))
    throw BindError(atom.pred + ": non-scalar parameter");
  return {true, std::get<double>(e.value)};
}

class ClosePred : public Predicate {
 public:
  void check_signature(std::size_t nargs, std::size_t nparams,
                       std::vector<std::string>& errors) const override {
    if (nargs != 2) errors.push_back("Close expects 2 arguments");
    if (nparams != 1) errors.push_back("Close expects 1 parameter (delta)");
  }
  Bool3 eval(const LocalFormula& atom, const PredCtx& ctx) const override {
    const TermEval a =
        eval_term(atom.args[0], ctx.view, ctx.clock, ctx.pos, ctx.env);
    if (!a.ok()) return Bool3::Unknown;
    const TermEval b =
        eval_term(atom.args[1], ctx.view, ctx.clock, ctx.pos, ctx.env);
    if (!b.ok()) return Bool3::Unknown;
    const ParamEval d = scalar_param(atom, 0, ctx);
    if (!d.ok) return Bool3::Unknown;
    return b3_of(close_points(as_vector(a.value, "Close"),
                              as_vector(b.value, "Close"),
                              d.value + ctx.env.options.eq_tol));
  }
};

class BoundedVariationPred : public Predicate {
 public:
  void check_signature(std::size_t nargs, std::size_t nparams,
                       std::vector<std::string>& errors) const override {
    if (nargs != 1) errors.push_back("BoundedVariation expects 1 argument");
    if (nparams != 1)
      errors.push_back("BoundedVariation expects 1 parameter (D)");
  }
  Bool3 eval(const LocalFormula& atom, const PredCtx& ctx) const override {
    const TermPtr& arg = atom.args[0];
    if (arg->kind != Term::Kind::Symbol)
      throw BindError("BoundedVariation argument must be a variable");
    const ParamEval dp = scalar_param(atom, 0, ctx);
    if (!dp.ok) return Bool3::Unknown;
    const double d = dp.value;
    const double tol = ctx.env.options.eq_tol;

    const SystemBehavior& beh = ctx.view.behavior();
    const int vi = beh.variable_index(arg->name);
    if (vi < 0) throw BindError("BoundedVariation: unknown variable " + arg->name);
    const auto& decl = beh.variables[static_cast<std::size_t>(vi)];

    if (decl.shape == ValueShape::TrajectoryShape) {
      // Lipschitz bound of the current trajectory in its own time argument.
      const TermEval tv = eval_term(arg, ctx.view, ctx.clock, ctx.pos, ctx.env);
      if (!tv.ok()) return Bool3::Unknown;
      const auto& traj = std::get<Trajectory>(tv.value);
      if (traj.empty()) return Bool3::True;
      const double h = beh.grid_step;
      const std::int64_t n =
          static_cast<std::int64_t>(std::floor(traj.horizon() / h + 0.5));
      Eigen::Vector2d prev = traj.state(0.0);
      for (std::int64_t k = 1; k <= n; ++k) {
        const double t = std::min(static_cast<double>(k) * h, traj.horizon());
        const Eigen::Vector2d cur = traj.state(t);
        const double dt = t - std::min(static_cast<double>(k - 1) * h,
                                       traj.horizon());
        if ((cur - prev).norm() > d * dt + tol) return Bool3::False;
        prev = cur;
      }
      return Bool3::True;
    }

    // Lipschitz-in-physical-time check between this observation and the
    // observer's next one. Inconclusive at the final tick.
    const int oi = beh.clock_index(ctx.clock);
    const int di = beh.clock_index(decl.clock);
    const auto j0 = ctx.view.sync_lookup(oi, di, ctx.pos + arg->offset);
    const auto j1 = ctx.view.sync_lookup(oi, di, ctx.pos + arg->offset + 1);
    if (!j0.ok() || !j1.ok()) return Bool3::Unknown;
    const auto t0 = data_instant(beh, ctx.view, di, j0.value);
    const auto t1 = data_instant(beh, ctx.view, di, j1.value);
    if (!t0.ok() || !t1.ok()) return Bool3::Unknown;

    const TermEval v0 = eval_term(arg, ctx.view, ctx.clock, ctx.pos, ctx.env);
    const TermEval v1 = eval_term(
        Term::symbol(arg->name, arg->offset + 1), ctx.view, ctx.clock,
        ctx.pos, ctx.env);
    if (!v0.ok() || !v1.ok()) return Bool3::Unknown;
    const Eigen::VectorXd a = as_vector(v0.value, "BoundedVariation");
    const Eigen::VectorXd b = as_vector(v1.value, "BoundedVariation");
    if (a.size() != b.size())
      throw DimensionMismatch("BoundedVariation: dimension change");
    return b3_of((b - a).norm() <= d * std::abs(t1.value - t0.value) + tol);
  }

 private:
  static ReadResult<double> data_instant(const SystemBehavior& beh,
                                         const BehaviorView& view, int di,
                                         std::int64_t tick) {
    if (beh.clocks[static_cast<std::size_t>(di)].kind == ClockKind::Physical)
      return {ReadStatus::Ok, static_cast<double>(tick) * beh.grid_step};
    // Physical instant of the data tick via its clock's map to r.
    int ri = -1;
    for (std::size_t i = 0; i < beh.clocks.size(); ++i)
      if (beh.clocks[i].kind == ClockKind::Physical) ri = static_cast<int>(i);
    if (ri < 0) return {ReadStatus::MissingSyncMap, 0.0};
    const auto g = view.sync_lookup(di, ri, tick);
    if (!g.ok()) return {g.status, 0.0};
    return {ReadStatus::Ok, static_cast<double>(g.value) * beh.grid_step};
  }
};

class RespectDynamicsPred : public Predicate {
 public:
  RespectDynamicsPred(PendulumParams plant) : plant_(plant) {}
  void check_signature(std::size_t nargs, std::size_t nparams,
                       std::vector<std::string>& errors) const override {
    if (nargs != 1) errors.push_back("RespectDynamics expects 1 argument");
    if (nparams != 0) errors.push_back("RespectDynamics expects no parameters");
  }
  Bool3 eval(const LocalFormula& atom, const PredCtx& ctx) const override {
    const TermEval tv =
        eval_term(atom.args[0], ctx.view, ctx.clock, ctx.pos, ctx.env);
    if (!tv.ok()) return Bool3::Unknown;
    if (!std::holds_alternative<Trajectory>(tv.value))
      throw BindError("RespectDynamics argument must be a trajectory");
    return b3_of(respect_dynamics(std::get<Trajectory>(tv.value), plant_,
                                  ctx.view.behavior().grid_step));
  }

 private:
  PendulumParams plant_;
};

class CostDecreasePred : public Predicate {
 public:
  CostDecreasePred(CostFunction cost) : cost_(std::move(cost)) {}
  void check_signature(std::size_t nargs, std::size_t nparams,
                       std::vector<std::string>& errors) const override {
    if (nargs != 2) errors.push_back("Cost expects 2 arguments");
    if (nparams != 0) errors.push_back("Cost expects no parameters");
  }
  Bool3 eval(const LocalFormula& atom, const PredCtx& ctx) const override {
    const TermEval a =
        eval_term(atom.args[0], ctx.view, ctx.clock, ctx.pos, ctx.env);
    if (!a.ok()) return Bool3::Unknown;
    const TermEval b =
        eval_term(atom.args[1], ctx.view, ctx.clock, ctx.pos, ctx.env);
    if (!b.ok()) return Bool3::Unknown;
    const Eigen::VectorXd pa = as_vector(a.value, "Cost");
    const Eigen::VectorXd pb = as_vector(b.value, "Cost");
    if (pa.size() != 2 || pb.size() != 2)
      throw DimensionMismatch("Cost expects planar states");
    return b3_of(cost_.cost(Eigen::Vector2d(pa(0), pa(1))) >
                 cost_.cost(Eigen::Vector2d(pb(0), pb(1))));
  }

 private:
  CostFunction cost_;
};

class CostZeroInflatedPred : public Predicate {
 public:
  CostZeroInflatedPred(CostFunction cost) : cost_(std::move(cost)) {}
  void check_signature(std::size_t nargs, std::size_t nparams,
                       std::vector<std::string>& errors) const override {
    if (nargs != 1) errors.push_back("CostZeroInflated expects 1 argument");
    if (nparams != 1)
      errors.push_back("CostZeroInflated expects 1 parameter (delta)");
  }
  Bool3 eval(const LocalFormula& atom, const PredCtx& ctx) const override {
    const ParamEval d = scalar_param(atom, 0, ctx);
    if (!d.ok) return Bool3::Unknown;
    const TermEval a =
        eval_term(atom.args[0], ctx.view, ctx.clock, ctx.pos, ctx.env);
    if (!a.ok()) return Bool3::Unknown;
    if (std::holds_alternative<Trajectory>(a.value))
      return b3_of(inflate_cost_zero(cost_, std::get<Trajectory>(a.value),
                                     d.value, ctx.view.behavior().grid_step));
    const Eigen::VectorXd p = as_vector(a.value, "CostZeroInflated");
    if (p.size() != 2) throw DimensionMismatch("CostZeroInflated expects planar states");
    const double tol = ctx.env.options.eq_tol;
    const Eigen::Vector2d q(p(0), p(1));
    bool inside = true;
    for (int i = 0; i < 2; ++i)
      if (std::abs(q(i) - cost_.center()(i)) >
          cost_.radii()(i) - d.value + tol)
        inside = false;
    return b3_of(inside);
  }

 private:
  CostFunction cost_;
};

}  // namespace

PredicateRegistry make_standard_registry(const PendulumParams& plant,
                                         const CostFunction& cost) {
  PredicateRegistry reg;
  reg.add("Close", std::make_unique<ClosePred>());
  reg.add("BoundedVariation", std::make_unique<BoundedVariationPred>());
  reg.add("RespectDynamics", std::make_unique<RespectDynamicsPred>(plant));
  reg.add("Cost", std::make_unique<CostDecreasePred>(cost));
  reg.add("CostZeroInflated", std::make_unique<CostZeroInflatedPred>(cost));
  return reg;
}

}  // namespace mcl
