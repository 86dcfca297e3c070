#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mcl/behavior.hpp"
#include "mcl/bool3.hpp"
#include "mcl/formula.hpp"

namespace mcl {

class PredicateRegistry;

struct EvalOptions {
  /// Real comparisons are tolerance-extended: a = b within eq_tol, and
  /// <, <=, >, >= give the benefit of eq_tol (grid times are sums of
  /// rounded doubles).
  double eq_tol = 1e-9;
};

struct BindError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AtomFailure {
  std::string atom;   // printed form
  std::string clock;
  std::int64_t pos;
};

struct FailLog {
  std::vector<AtomFailure> failures;
  std::size_t cap = 64;

  void add(std::string atom, const std::string& clock, std::int64_t pos) {
    if (failures.size() < cap)
      failures.push_back({std::move(atom), clock, pos});
  }
};

using TermValue = std::variant<double, Eigen::VectorXd, Trajectory>;

struct TermEval {
  ReadStatus status = ReadStatus::Ok;
  TermValue value;

  bool ok() const { return status == ReadStatus::Ok; }
};

/// Everything needed to evaluate formulas against one behavior: parameter
/// bindings for named constants and the predicate registry (may be null when
/// only comparisons are used).
struct Env {
  const SystemBehavior* behavior = nullptr;
  std::map<std::string, double> params;
  const PredicateRegistry* predicates = nullptr;
  EvalOptions options;
  FailLog* log = nullptr;  // optional failing-atom collection
};

/// Validates that every name in the formula binds against the behavior's
/// declarations, the parameter map, and the predicate registry, and that
/// term shapes are usable. Throws BindError listing all problems.
void bind_check(const GlobalPtr& f, const Env& env);

/// Term value at (clock, pos) under the view; OutOfTrace surfaces in status.
TermEval eval_term(const TermPtr& t, const BehaviorView& view,
                   const std::string& clock, std::int64_t pos,
                   const Env& env);

Verdict eval_local(const LocalPtr& f, const BehaviorView& view,
                   const std::string& clock, std::int64_t pos, const Env& env);

Verdict eval_global(const GlobalPtr& f, const Env& env);

}  // namespace mcl
