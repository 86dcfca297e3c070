#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcl/eval.hpp"
#include "mcl/formula.hpp"

namespace mcl {

/// Assume-guarantee contract (a, g) over global MCL formulas, plus the named
/// constants its atoms reference.
struct Contract {
  std::string name;
  GlobalPtr assumptions;
  GlobalPtr guarantees;
  std::map<std::string, double> params;
  std::string comment;  // leading // lines when printed (annotations)
};

struct BehaviorReport {
  Verdict assumptions;
  Verdict guarantees;
  Verdict implication;  // a -> g, the satisfaction formula
  std::vector<AtomFailure> failing_atoms;
};

/// Per-behavior verdicts for a, g, a -> g; the aggregate is the Kleene
/// conjunction of the implication verdicts over all behaviors.
struct SatisfactionReport {
  std::vector<BehaviorReport> behaviors;
  Verdict aggregate{Bool3::True, {}};
};

/// Env without behavior: registry/options shared across the corpus.
struct MonitorConfig {
  const PredicateRegistry* predicates = nullptr;
  EvalOptions options;
};

SatisfactionReport satisfies(const std::vector<const SystemBehavior*>& corpus,
                             const Contract& c, const MonitorConfig& cfg);

/// Paper-verbatim composition:
///   ((a && a') || (a && !g) || (a' && !g'), (a -> g) && (a' -> g')).
/// No boolean simplification is applied.
Contract compose(const Contract& c, const Contract& c2);

struct RefinementResult {
  bool holds = true;
  int counterexample = -1;  // corpus index of the witnessing behavior
  std::string reason;
};

/// Corpus-relative refinement falsification of c <= c2: looks for a behavior
/// where a2 holds but a does not, or a->g holds but a2->g2 does not.
RefinementResult refines_on(const Contract& c, const Contract& c2,
                            const std::vector<const SystemBehavior*>& corpus,
                            const MonitorConfig& cfg);

struct SoundnessReport {
  bool refinement_holds = false;
  int checked = 0;
  std::vector<int> violations;  // corpus indices (toolkit bugs if nonempty)
};

/// For every corpus behavior implementing both c and c2, verifies it also
/// satisfies c3 whenever compose(c, c2) refines c3 on the corpus.
SoundnessReport check_composition_soundness(
    const Contract& c, const Contract& c2, const Contract& c3,
    const std::vector<const SystemBehavior*>& corpus,
    const MonitorConfig& cfg);

/// Contract file: `contract <name>`, a `params:` block of `name value`
/// lines, and `assume:` / `guarantee:` MCL formula blocks.
Contract parse_contract(const std::string& text);
std::string print_contract(const Contract& c);

Contract load_contract_file(const std::string& path);
void write_contract_file(const Contract& c, const std::string& path);

}  // namespace mcl
