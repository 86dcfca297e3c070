#include <doctest.h>

#include <bitset>

#include "mcl/contract.hpp"
#include "mcl/parser.hpp"
#include "mcl/rng.hpp"

using namespace mcl;

namespace {

// One-tick behaviors over k boolean variables b0..b3 on clock c.
SystemBehavior boolean_behavior(int k, unsigned valuation) {
  SystemBehavior b;
  b.grid_step = 1e-3;
  b.clocks = {{"c", ClockKind::Discrete}, {"r", ClockKind::Physical}};
  b.traces.resize(2);
  b.traces[0].clock = "c";
  b.traces[0].valuations.resize(1);
  for (int i = 0; i < k; ++i) {
    b.variables.push_back({"b" + std::to_string(i), "c", ValueShape::Scalar, 1});
    b.traces[0].valuations[0].push_back(
        Value{(valuation >> i) & 1u ? 1.0 : 0.0});
  }
  b.traces[1].clock = "r";
  b.traces[1].valuations = {{}};
  b.syncs = {{"c", "r", {0}}, {"r", "c", {0}}};
  return b;
}

std::vector<SystemBehavior> all_boolean_behaviors(int k) {
  std::vector<SystemBehavior> out;
  for (unsigned v = 0; v < (1u << k); ++v)
    out.push_back(boolean_behavior(k, v));
  return out;
}

std::vector<const SystemBehavior*> ptrs(const std::vector<SystemBehavior>& v) {
  std::vector<const SystemBehavior*> out;
  for (const auto& b : v) out.push_back(&b);
  return out;
}

GlobalPtr random_prop(Rng& rng, int k, int depth) {
  if (depth <= 0 || rng.next_below(3) == 0) {
    const int var = static_cast<int>(rng.next_below(k));
    const bool positive = rng.next_below(2);
    return parse("@c. b" + std::to_string(var) + (positive ? " = 1" : " = 0"));
  }
  switch (rng.next_below(4)) {
    case 0: return GlobalFormula::negate(random_prop(rng, k, depth - 1));
    case 1:
      return GlobalFormula::binary(GlobalFormula::Kind::And,
                                   random_prop(rng, k, depth - 1),
                                   random_prop(rng, k, depth - 1));
    case 2:
      return GlobalFormula::binary(GlobalFormula::Kind::Or,
                                   random_prop(rng, k, depth - 1),
                                   random_prop(rng, k, depth - 1));
    default:
      return GlobalFormula::binary(GlobalFormula::Kind::Implies,
                                   random_prop(rng, k, depth - 1),
                                   random_prop(rng, k, depth - 1));
  }
}

// Independent truth-table route: interpret the formula over valuation bits.
bool prop_eval(const GlobalPtr& f, unsigned valuation);

bool prop_eval_local(const LocalPtr& f, unsigned valuation) {
  using K = LocalFormula::Kind;
  switch (f->kind) {
    case K::TrueLit: return true;
    case K::FalseLit: return false;
    case K::Cmp: {
      const int var = std::stoi(f->tl->name.substr(1));
      const bool bit = (valuation >> var) & 1u;
      return f->tr->value == 1.0 ? bit : !bit;
    }
    case K::Not: return !prop_eval_local(f->a, valuation);
    case K::And:
      return prop_eval_local(f->a, valuation) &&
             prop_eval_local(f->b, valuation);
    case K::Or:
      return prop_eval_local(f->a, valuation) ||
             prop_eval_local(f->b, valuation);
    case K::Implies:
      return !prop_eval_local(f->a, valuation) ||
             prop_eval_local(f->b, valuation);
    default: throw std::runtime_error("not propositional");
  }
}

bool prop_eval(const GlobalPtr& f, unsigned valuation) {
  using K = GlobalFormula::Kind;
  switch (f->kind) {
    case K::Bind: return prop_eval_local(f->body, valuation);
    case K::Not: return !prop_eval(f->a, valuation);
    case K::And: return prop_eval(f->a, valuation) && prop_eval(f->b, valuation);
    case K::Or: return prop_eval(f->a, valuation) || prop_eval(f->b, valuation);
    default:
      return !prop_eval(f->a, valuation) || prop_eval(f->b, valuation);
  }
}

unsigned truth_mask(const GlobalPtr& f, int k) {
  unsigned mask = 0;
  for (unsigned v = 0; v < (1u << k); ++v)
    if (prop_eval(f, v)) mask |= (1u << v);
  return mask;
}

Contract make_contract(std::string name, GlobalPtr a, GlobalPtr g) {
  Contract c;
  c.name = std::move(name);
  c.assumptions = std::move(a);
  c.guarantees = std::move(g);
  return c;
}

}  // namespace

TEST_CASE("satisfies: vacuous assumptions, localized violations, empty set") {
  const auto corpus = all_boolean_behaviors(2);
  MonitorConfig cfg;

  // assumptions false everywhere: every behavior satisfies vacuously
  const Contract vac = make_contract("vac", parse("@c. false"),
                                     parse("@c. b0 = 1"));
  CHECK(satisfies(ptrs(corpus), vac, cfg).aggregate.value == Bool3::True);

  // true assumption, violated guarantee, atom localized at tick 0
  const Contract bad =
      make_contract("bad", parse("@c. true"), parse("@c. b0 = 1"));
  const std::vector<const SystemBehavior*> just0 = {&corpus[0]};
  const SatisfactionReport rep = satisfies(just0, bad, cfg);
  CHECK(rep.aggregate.value == Bool3::False);
  REQUIRE(!rep.behaviors[0].failing_atoms.empty());
  CHECK(rep.behaviors[0].failing_atoms[0].pos == 0);

  // empty behavior set: universally true
  CHECK(satisfies({}, bad, cfg).aggregate.value == Bool3::True);
}

TEST_CASE("compose keeps the unsimplified assume/guarantee shape") {
  const Contract c =
      make_contract("A", parse("@c. b0 = 1"), parse("@c. b1 = 1"));
  const Contract unit =
      make_contract("U", parse("@c. true"), parse("@c. true"));
  const Contract both = compose(c, unit);
  CHECK(print(both.assumptions) ==
        "((((@c. b0 = 1) && (@c. true)) || ((@c. b0 = 1) && !(@c. b1 = 1))) "
        "|| ((@c. true) && !(@c. true)))");
  CHECK(print(both.guarantees) ==
        "(((@c. b0 = 1) -> (@c. b1 = 1)) && ((@c. true) -> (@c. true)))");

  const Contract twice = compose(c, c);
  CHECK(print(twice.guarantees) ==
        "(((@c. b0 = 1) -> (@c. b1 = 1)) && ((@c. b0 = 1) -> (@c. b1 = 1)))");
}

TEST_CASE("compose is commutative up to verdict equality") {
  Rng rng(21);
  const int k = 3;
  const auto corpus = all_boolean_behaviors(k);
  MonitorConfig cfg;
  for (int trial = 0; trial < 60; ++trial) {
    const Contract c = make_contract("C", random_prop(rng, k, 2),
                                     random_prop(rng, k, 2));
    const Contract d = make_contract("D", random_prop(rng, k, 2),
                                     random_prop(rng, k, 2));
    const Contract cd = compose(c, d);
    const Contract dc = compose(d, c);
    for (const auto& b : corpus) {
      Env env;
      env.behavior = &b;
      CHECK(eval_global(cd.assumptions, env).value ==
            eval_global(dc.assumptions, env).value);
      CHECK(eval_global(cd.guarantees, env).value ==
            eval_global(dc.guarantees, env).value);
    }
  }
}

TEST_CASE("joint satisfaction implies satisfaction of the composite") {
  Rng rng(22);
  const int k = 3;
  const auto corpus = all_boolean_behaviors(k);
  MonitorConfig cfg;
  for (int trial = 0; trial < 60; ++trial) {
    const Contract c = make_contract("C", random_prop(rng, k, 2),
                                     random_prop(rng, k, 2));
    const Contract d = make_contract("D", random_prop(rng, k, 2),
                                     random_prop(rng, k, 2));
    const Contract cd = compose(c, d);
    for (const auto& b : corpus) {
      const std::vector<const SystemBehavior*> one = {&b};
      if (satisfies(one, c, cfg).aggregate.value == Bool3::True &&
          satisfies(one, d, cfg).aggregate.value == Bool3::True)
        CHECK(satisfies(one, cd, cfg).aggregate.value == Bool3::True);
    }
  }
}

TEST_CASE("refines_on: reflexivity and guarantee weakening") {
  const auto corpus = all_boolean_behaviors(2);
  MonitorConfig cfg;
  const Contract c =
      make_contract("C", parse("@c. b0 = 1"), parse("@c. b1 = 1"));
  CHECK(refines_on(c, c, ptrs(corpus), cfg).holds);

  const Contract strong =
      make_contract("S", parse("@c. true"), parse("@c. b1 = 1"));
  const Contract weak = make_contract(
      "W", parse("@c. true"), parse("(@c. b1 = 1) || (@c. b0 = 1)"));
  CHECK(refines_on(strong, weak, ptrs(corpus), cfg).holds);
  CHECK_FALSE(refines_on(weak, strong, ptrs(corpus), cfg).holds);
}

TEST_CASE("refines_on matches the truth-table oracle exactly") {
  MonitorConfig cfg;
  Rng rng(23);
  for (int k = 1; k <= 4; ++k) {
    const auto corpus = all_boolean_behaviors(k);
    const auto corpus_ptrs = ptrs(corpus);
    const unsigned full = (1u << (1u << k)) - 1u;
    const int trials = k <= 2 ? 400 : 150;
    for (int trial = 0; trial < trials; ++trial) {
      const Contract c = make_contract("C", random_prop(rng, k, 3),
                                       random_prop(rng, k, 3));
      const Contract c2 = make_contract("C2", random_prop(rng, k, 3),
                                        random_prop(rng, k, 3));
      const unsigned a = truth_mask(c.assumptions, k);
      const unsigned g = truth_mask(c.guarantees, k);
      const unsigned a2 = truth_mask(c2.assumptions, k);
      const unsigned g2 = truth_mask(c2.guarantees, k);
      const unsigned impl = (~a | g) & full;
      const unsigned impl2 = (~a2 | g2) & full;
      // a2 <= a and (a -> g) <= (a2 -> g2), as truth-table containments
      const bool oracle = ((a2 & ~a) == 0u) && ((impl & ~impl2) == 0u);
      CAPTURE(k);
      CAPTURE(trial);
      CHECK(refines_on(c, c2, corpus_ptrs, cfg).holds == oracle);
    }
  }
}

TEST_CASE("composition soundness: no violations over exhaustive instances") {
  MonitorConfig cfg;
  Rng rng(24);
  for (int k = 1; k <= 4; ++k) {
    const auto corpus = all_boolean_behaviors(k);
    const auto corpus_ptrs = ptrs(corpus);
    const int trials = k <= 2 ? 200 : 80;
    int refinements_held = 0;
    for (int trial = 0; trial < trials; ++trial) {
      const Contract c = make_contract("C", random_prop(rng, k, 2),
                                       random_prop(rng, k, 2));
      const Contract c2 = make_contract("C2", random_prop(rng, k, 2),
                                        random_prop(rng, k, 2));
      const Contract c3 = make_contract("C3", random_prop(rng, k, 2),
                                        random_prop(rng, k, 2));
      const SoundnessReport rep =
          check_composition_soundness(c, c2, c3, corpus_ptrs, cfg);
      if (rep.refinement_holds) ++refinements_held;
      CHECK(rep.violations.empty());

      // the composite refines itself: zero violations by reflexivity
      const SoundnessReport self = check_composition_soundness(
          c, c2, compose(c, c2), corpus_ptrs, cfg);
      CHECK(self.refinement_holds);
      CHECK(self.violations.empty());
    }
    CHECK(refinements_held > 0);  // the check is not vacuous
  }
}

TEST_CASE("soundness check is vacuous over an unsatisfying corpus") {
  MonitorConfig cfg;
  const auto corpus = all_boolean_behaviors(1);
  // components contradict every behavior: b0 = 1 guaranteed under true
  // assumption, checked against behaviors where it is false
  const Contract c =
      make_contract("C", parse("@c. true"), parse("@c. b0 = 1"));
  const Contract d =
      make_contract("D", parse("@c. true"), parse("@c. b0 = 0"));
  const Contract top =
      make_contract("T", parse("@c. false"), parse("@c. true"));
  const SoundnessReport rep =
      check_composition_soundness(c, d, top, ptrs(corpus), cfg);
  CHECK(rep.checked == 0);
  CHECK(rep.violations.empty());
}

TEST_CASE("contract files round-trip") {
  const std::string text =
      "contract demo\n"
      "params:\n"
      "  d 0.25\n"
      "assume:\n"
      "  @c. b0 = 1\n"
      "guarantee:\n"
      "  @c. G[0,inf] (b1 = 1)\n";
  const Contract c = parse_contract(text);
  CHECK(c.name == "demo");
  CHECK(c.params.at("d") == 0.25);
  const Contract round = parse_contract(print_contract(c));
  CHECK(structurally_equal(c.assumptions, round.assumptions));
  CHECK(structurally_equal(c.guarantees, round.guarantees));
  CHECK(round.params.at("d") == 0.25);
}
