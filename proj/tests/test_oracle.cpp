#include <doctest.h>

#include "mcl/eval.hpp"
#include "oracle_support.hpp"

using namespace mcl;
using namespace mcl::testing;

// Fast slices of the acceptance-scale randomized comparisons; the acceptance
// binary runs the full volumes.

TEST_CASE("evaluator agrees with the shifted-execution oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 1500; ++trial) {
    const SystemBehavior b = random_behavior(rng);
    const GlobalPtr f = random_global(rng, 4);
    Env env;
    env.behavior = &b;
    CAPTURE(trial);
    CAPTURE(print(f));
    CHECK(eval_global(f, env).value == oracle_global(f, env));
  }
}

TEST_CASE("G[a,b] is exactly !F[a,b]! on random instances") {
  Rng rng(43);
  for (int trial = 0; trial < 1500; ++trial) {
    const SystemBehavior b = random_behavior(rng);
    const std::string clock = rng.next_below(2) ? "c" : "r";
    const LocalPtr body = random_local(rng, 3, clock);
    const std::int64_t lo = static_cast<std::int64_t>(rng.next_below(3));
    const std::int64_t hi = lo + static_cast<std::int64_t>(rng.next_below(4));
    const bool unbounded = rng.next_below(4) == 0;

    const LocalPtr g = LocalFormula::modal(LocalFormula::Kind::Globally, lo,
                                           hi, unbounded, body);
    const LocalPtr dual = LocalFormula::negate(
        LocalFormula::modal(LocalFormula::Kind::Eventually, lo, hi, unbounded,
                            LocalFormula::negate(body)));
    Env env;
    env.behavior = &b;
    BehaviorView view(b);
    const std::int64_t pos = static_cast<std::int64_t>(rng.next_below(6));
    CAPTURE(trial);
    CHECK(eval_local(g, view, clock, pos, env).value ==
          eval_local(dual, view, clock, pos, env).value);
  }
}

TEST_CASE("position-based evaluation equals evaluation on shifted views") {
  Rng rng(44);
  for (int trial = 0; trial < 1500; ++trial) {
    const SystemBehavior b = random_behavior(rng);
    const std::string clock = rng.next_below(2) ? "c" : "r";
    const LocalPtr body = random_local(rng, 3, clock);
    Env env;
    env.behavior = &b;
    BehaviorView view(b);
    const std::int64_t pos =
        1 + static_cast<std::int64_t>(rng.next_below(5));
    const Verdict at_pos = eval_local(body, view, clock, pos, env);
    const Verdict shifted = eval_local(
        body, shift_execution(view, clock, 1), clock, pos - 1, env);
    CAPTURE(trial);
    CHECK(at_pos.value == shifted.value);
  }
}
