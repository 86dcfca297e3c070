#include "mcl/eval.hpp"

#include <cmath>
#include <functional>

#include "mcl/predicates.hpp"

namespace mcl {

namespace {

enum class SymKind { Variable, Clock, Param, Unknown };

SymKind resolve(const std::string& name, const Env& env) {
  if (env.behavior->has_variable(name)) return SymKind::Variable;
  if (env.behavior->has_clock(name)) return SymKind::Clock;
  if (env.params.count(name)) return SymKind::Param;
  return SymKind::Unknown;
}

}  // namespace

// ---------------------------------------------------------------- bind check

namespace {

class BindChecker {
 public:
  BindChecker(const Env& env) : env_(env) {}

  void run(const GlobalPtr& f) {
    walk_global(f);
    if (!errors_.empty()) {
      std::string msg = "bind error:";
      for (const auto& e : errors_) msg += "\n  " + e;
      throw BindError(msg);
    }
  }

 private:
  void err(std::string m) { errors_.push_back(std::move(m)); }

  void walk_global(const GlobalPtr& f) {
    if (!f) return;
    if (f->kind == GlobalFormula::Kind::Bind) {
      if (!env_.behavior->has_clock(f->clock)) {
        err("unknown clock '" + f->clock + "'");
        return;
      }
      clock_ = f->clock;
      walk_local(f->body);
      return;
    }
    walk_global(f->a);
    walk_global(f->b);
  }

  void walk_local(const LocalPtr& f) {
    if (!f) return;
    using K = LocalFormula::Kind;
    switch (f->kind) {
      case K::Atom: {
        if (!env_.predicates) {
          err("no predicate registry bound, cannot use '" + f->pred + "'");
        } else if (const Predicate* p = env_.predicates->find(f->pred)) {
          p->check_signature(f->args.size(), f->params.size(), errors_);
        } else {
          err("unknown predicate '" + f->pred + "'");
        }
        for (const auto& a : f->args) walk_term(a, /*atom_arg=*/true);
        for (const auto& p : f->params) walk_term(p, /*atom_arg=*/false);
        break;
      }
      case K::Cmp:
        walk_term(f->tl, false);
        walk_term(f->tr, false);
        break;
      default:
        walk_local(f->a);
        walk_local(f->b);
        walk_local(f->c);
        break;
    }
  }

  // atom_arg: vectors and trajectories allowed (predicates take them whole).
  void walk_term(const TermPtr& t, bool atom_arg) {
    if (!t) return;
    switch (t->kind) {
      case Term::Kind::Const:
        return;
      case Term::Kind::Add:
      case Term::Kind::Sub:
      case Term::Kind::Mul:
        walk_term(t->lhs, false);
        walk_term(t->rhs, false);
        return;
      case Term::Kind::ClockPair: {
        if (!env_.behavior->has_clock(t->name))
          err("clock pair middle '" + t->name + "' is not a clock");
        if (!env_.behavior->has_clock(t->pair_target))
          err("clock pair target '" + t->pair_target + "' is not a clock");
        if (t->name == clock_)
          err("clock pair '" + t->name + "^" + t->pair_target +
              "' uses the binding clock as middle clock");
        else
          need_sync(clock_, t->name);
        if (t->name != t->pair_target) need_sync(t->name, t->pair_target);
        return;
      }
      case Term::Kind::Symbol: {
        const SymKind k = resolve(t->name, env_);
        if (k == SymKind::Unknown) {
          err("unknown symbol '" + t->name + "'");
          return;
        }
        if (t->traj_time) {
          if (k != SymKind::Variable ||
              var_shape(t->name) != ValueShape::TrajectoryShape)
            err("trajectory time argument on non-trajectory symbol '" +
                t->name + "'");
          walk_term(t->traj_time, false);
        }
        if (k == SymKind::Variable) {
          const ValueShape s = var_shape(t->name);
          if (!atom_arg && s == ValueShape::Vector)
            err("vector variable '" + t->name + "' used where a scalar is required");
          if (!atom_arg && s == ValueShape::TrajectoryShape && t->traj_time)
            err("trajectory sample '" + t->name + "' (a state vector) used where a scalar is required");
          if (!atom_arg && s == ValueShape::TrajectoryShape && !t->traj_time)
            err("trajectory variable '" + t->name + "' used where a scalar is required");
          const std::string& vclock =
              env_.behavior->variables[static_cast<std::size_t>(
                                           env_.behavior->variable_index(t->name))]
                  .clock;
          if (vclock != clock_) need_sync(clock_, vclock);
        } else if (k == SymKind::Clock) {
          if (t->name != clock_) need_sync(clock_, t->name);
        } else if (k == SymKind::Param && t->offset != 0) {
          err("offset on parameter '" + t->name + "'");
        }
        return;
      }
    }
  }

  ValueShape var_shape(const std::string& name) const {
    return env_.behavior
        ->variables[static_cast<std::size_t>(
            env_.behavior->variable_index(name))]
        .shape;
  }

  void need_sync(const std::string& src, const std::string& dst) {
    if (src == dst) return;
    if (!env_.behavior->find_sync(src, dst))
      err("missing synchronization map " + src + " -> " + dst);
  }

  const Env& env_;
  std::string clock_;
  std::vector<std::string> errors_;
};

}  // namespace

void bind_check(const GlobalPtr& f, const Env& env) {
  if (!env.behavior) throw BindError("bind error: no behavior in environment");
  BindChecker(env).run(f);
}

// ---------------------------------------------------------------- term eval

TermEval eval_term(const TermPtr& t, const BehaviorView& view,
                   const std::string& clock, std::int64_t pos,
                   const Env& env) {
  switch (t->kind) {
    case Term::Kind::Const:
      return {ReadStatus::Ok, TermValue{t->value}};
    case Term::Kind::Symbol: {
      switch (resolve(t->name, env)) {
        case SymKind::Variable: {
          auto r = view.read_variable(clock, t->name, pos + t->offset);
          if (!r.ok()) return {r.status, {}};
          if (std::holds_alternative<double>(r.value))
            return {ReadStatus::Ok, TermValue{std::get<double>(r.value)}};
          if (std::holds_alternative<Eigen::VectorXd>(r.value))
            return {ReadStatus::Ok,
                    TermValue{std::get<Eigen::VectorXd>(r.value)}};
          Trajectory traj = std::get<Trajectory>(r.value);
          if (!t->traj_time)
            return {ReadStatus::Ok, TermValue{std::move(traj)}};
          TermEval tt = eval_term(t->traj_time, view, clock, pos, env);
          if (!tt.ok()) return {tt.status, {}};
          const Eigen::Vector2d s = traj.state(std::get<double>(tt.value));
          Eigen::VectorXd v(2);
          v << s(0), s(1);
          return {ReadStatus::Ok, TermValue{std::move(v)}};
        }
        case SymKind::Clock: {
          auto r = view.read_clock(clock, t->name, pos + t->offset);
          if (!r.ok()) return {r.status, {}};
          return {ReadStatus::Ok, TermValue{r.value}};
        }
        case SymKind::Param:
          return {ReadStatus::Ok, TermValue{env.params.at(t->name)}};
        default:
          throw BindError("unknown symbol '" + t->name + "'");
      }
    }
    case Term::Kind::ClockPair: {
      auto r = view.read_clock_pair(clock, t->name, t->pair_target,
                                    pos + t->offset);
      if (!r.ok()) return {r.status, {}};
      return {ReadStatus::Ok, TermValue{r.value}};
    }
    default: {
      TermEval a = eval_term(t->lhs, view, clock, pos, env);
      if (!a.ok()) return a;
      TermEval b = eval_term(t->rhs, view, clock, pos, env);
      if (!b.ok()) return b;
      if (!std::holds_alternative<double>(a.value) ||
          !std::holds_alternative<double>(b.value))
        throw BindError("arithmetic on non-scalar term");
      const double x = std::get<double>(a.value);
      const double y = std::get<double>(b.value);
      double out = 0.0;
      if (t->kind == Term::Kind::Add) out = x + y;
      if (t->kind == Term::Kind::Sub) out = x - y;
      if (t->kind == Term::Kind::Mul) out = x * y;
      return {ReadStatus::Ok, TermValue{out}};
    }
  }
}

// ---------------------------------------------------------------- local eval

namespace {

struct MemoKey {
  const LocalFormula* node;
  std::int64_t pos;
  bool operator==(const MemoKey& o) const {
    return node == o.node && pos == o.pos;
  }
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    return std::hash<const void*>()(k.node) ^
           (std::hash<std::int64_t>()(k.pos) * 0x9e3779b97f4a7c15ull);
  }
};

class Evaluator {
 public:
  Evaluator(const BehaviorView& view, const std::string& clock, const Env& env)
      : view_(view), clock_(clock), env_(env) {
    const int ci = view.behavior().clock_index(clock);
    len_ = view.behavior().traces[static_cast<std::size_t>(ci)].tick_count();
    shift_ = view.shift_of(ci);
  }

  Verdict eval(const LocalPtr& f, std::int64_t pos) {
    using K = LocalFormula::Kind;
    switch (f->kind) {
      case K::TrueLit: return {Bool3::True, {}};
      case K::FalseLit: return {Bool3::False, {}};
      case K::Atom: return atom(f, pos);
      case K::Cmp: return cmp(f, pos);
      case K::Not: {
        Verdict v = eval(f->a, pos);
        return {b3_not(v.value), v.witness};
      }
      case K::And: {
        Verdict a = eval(f->a, pos);
        if (a.value == Bool3::False) return a;
        Verdict b = eval(f->b, pos);
        if (b.value == Bool3::False) return b;
        return {b3_and(a.value, b.value), {}};
      }
      case K::Or: {
        Verdict a = eval(f->a, pos);
        if (a.value == Bool3::True) return a;
        Verdict b = eval(f->b, pos);
        if (b.value == Bool3::True) return b;
        return {b3_or(a.value, b.value), {}};
      }
      case K::Implies: {
        Verdict a = eval(f->a, pos);
        if (a.value == Bool3::False) return {Bool3::True, {}};
        Verdict b = eval(f->b, pos);
        if (b.value == Bool3::True) return b;
        return {b3_implies(a.value, b.value),
                b.value == Bool3::False && a.value == Bool3::True ? b.witness
                                                                  : std::nullopt};
      }
      case K::IfThenElse: {
        const Verdict c = eval(f->a, pos);
        const Verdict t = eval(f->b, pos);
        const Verdict e = eval(f->c, pos);
        const Bool3 v = b3_and(b3_implies(c.value, t.value),
                               b3_implies(b3_not(c.value), e.value));
        std::optional<std::int64_t> witness;
        if (v == Bool3::False)
          witness = c.value == Bool3::True ? t.witness : e.witness;
        return {v, witness};
      }
      case K::Eventually:
      case K::Globally:
        if (f->unbounded) return unbounded(f, pos);
        return bounded(f, pos);
    }
    return {Bool3::Unknown, {}};
  }

 private:
  bool position_exists(std::int64_t p) const {
    const std::int64_t abs = p + shift_;
    return abs >= 0 && abs < len_;
  }

  Verdict atom(const LocalPtr& f, std::int64_t pos) {
    const Predicate* p = env_.predicates ? env_.predicates->find(f->pred)
                                         : nullptr;
    if (!p) throw BindError("unknown predicate '" + f->pred + "'");
    const Bool3 v = p->eval(*f, PredCtx{view_, clock_, pos, env_});
    if (v == Bool3::False && env_.log)
      env_.log->add(print(f), clock_, pos);
    return {v, pos};
  }

  Verdict cmp(const LocalPtr& f, std::int64_t pos) {
    const TermEval a = eval_term(f->tl, view_, clock_, pos, env_);
    if (!a.ok()) return {Bool3::Unknown, {}};
    const TermEval b = eval_term(f->tr, view_, clock_, pos, env_);
    if (!b.ok()) return {Bool3::Unknown, {}};
    if (!std::holds_alternative<double>(a.value) ||
        !std::holds_alternative<double>(b.value))
      throw BindError("comparison of non-scalar terms");
    const double x = std::get<double>(a.value);
    const double y = std::get<double>(b.value);
    // Values within eq_tol compare as equal; strict orders must clear the
    // tolerance (so Le = !Gt and Ge = !Lt hold exactly).
    const double tol = env_.options.eq_tol;
    bool r = false;
    switch (f->op) {
      case CmpOp::Lt: r = x < y - tol; break;
      case CmpOp::Le: r = x <= y + tol; break;
      case CmpOp::Eq: r = std::abs(x - y) <= tol; break;
      case CmpOp::Ne: r = std::abs(x - y) > tol; break;
      case CmpOp::Gt: r = x > y + tol; break;
      case CmpOp::Ge: r = x >= y - tol; break;
    }
    if (!r && env_.log) env_.log->add(print(f), clock_, pos);
    return {b3_of(r), pos};
  }

  Verdict bounded(const LocalPtr& f, std::int64_t pos) {
    const bool eventually = f->kind == LocalFormula::Kind::Eventually;
    const std::int64_t first = pos + f->lo;
    const std::int64_t last = pos + f->hi;
    bool missing = false;
    Verdict acc{eventually ? Bool3::False : Bool3::True, {}};
    for (std::int64_t p = first; p <= last; ++p) {
      if (!position_exists(p)) {
        missing = true;
        continue;
      }
      const Verdict v = eval(f->a, p);
      if (eventually) {
        if (v.value == Bool3::True) return {Bool3::True, p};
        acc.value = b3_or(acc.value, v.value);
      } else {
        if (v.value == Bool3::False) return {Bool3::False, p};
        acc.value = b3_and(acc.value, v.value);
      }
    }
    // A window reaching past the recorded ticks stays undecided unless an
    // early witness already settled it.
    if (missing) acc.value = Bool3::Unknown;
    return acc;
  }

  // Unbounded modalities via the backward recurrence
  //   F(p) = body(p) | F(p+1),  G(p) = body(p) & G(p+1)
  // with the beyond-trace tail Unknown; memoized per (node, pos).
  Verdict unbounded(const LocalPtr& f, std::int64_t pos) {
    const bool eventually = f->kind == LocalFormula::Kind::Eventually;
    const std::int64_t first = std::max(pos + f->lo, -shift_);
    const std::int64_t last = len_ - 1 - shift_;
    if (first > last) return {Bool3::Unknown, {}};

    const MemoKey want{f.get(), first};
    if (auto it = memo_.find(want); it == memo_.end()) {
      std::int64_t from = last;
      Verdict acc{Bool3::Unknown, {}};
      // Resume from the lowest already-memoized suffix if present.
      for (std::int64_t p = first; p <= last; ++p) {
        if (auto hit = memo_.find(MemoKey{f.get(), p}); hit != memo_.end()) {
          from = p - 1;
          acc = hit->second;
          break;
        }
      }
      for (std::int64_t p = from; p >= first; --p) {
        const Verdict v = eval(f->a, p);
        if (eventually) {
          if (v.value == Bool3::True)
            acc = {Bool3::True, p};
          else
            acc = {b3_or(v.value, acc.value), acc.witness};
        } else {
          if (v.value == Bool3::False)
            acc = {Bool3::False, p};
          else
            acc = {b3_and(v.value, acc.value), acc.witness};
        }
        memo_.emplace(MemoKey{f.get(), p}, acc);
      }
    }
    return memo_.at(want);
  }

  const BehaviorView& view_;
  const std::string& clock_;
  const Env& env_;
  std::int64_t len_ = 0;
  std::int64_t shift_ = 0;
  std::unordered_map<MemoKey, Verdict, MemoKeyHash> memo_;
};

}  // namespace

Verdict eval_local(const LocalPtr& f, const BehaviorView& view,
                   const std::string& clock, std::int64_t pos,
                   const Env& env) {
  Evaluator ev(view, clock, env);
  return ev.eval(f, pos);
}

Verdict eval_global(const GlobalPtr& f, const Env& env) {
  using K = GlobalFormula::Kind;
  switch (f->kind) {
    case K::Bind: {
      BehaviorView view(*env.behavior);
      return eval_local(f->body, view, f->clock, 0, env);
    }
    case K::Not: {
      Verdict v = eval_global(f->a, env);
      return {b3_not(v.value), v.witness};
    }
    case K::And: {
      const Verdict a = eval_global(f->a, env);
      if (a.value == Bool3::False) return a;
      const Verdict b = eval_global(f->b, env);
      if (b.value == Bool3::False) return b;
      return {b3_and(a.value, b.value), {}};
    }
    case K::Or: {
      const Verdict a = eval_global(f->a, env);
      if (a.value == Bool3::True) return a;
      const Verdict b = eval_global(f->b, env);
      if (b.value == Bool3::True) return b;
      return {b3_or(a.value, b.value), {}};
    }
    default: {
      const Verdict a = eval_global(f->a, env);
      if (a.value == Bool3::False) return {Bool3::True, {}};
      const Verdict b = eval_global(f->b, env);
      return {b3_implies(a.value, b.value), b.witness};
    }
  }
}

}  // namespace mcl
