#include <doctest.h>

#include "mcl/eval.hpp"
#include "mcl/parser.hpp"
#include "oracle_support.hpp"

using namespace mcl;

namespace {

// One clock c with scalar y = given values (plus the mandatory physical r).
SystemBehavior y_trace(std::vector<double> ys) {
  SystemBehavior b;
  b.grid_step = 1e-3;
  b.clocks = {{"c", ClockKind::Discrete}, {"r", ClockKind::Physical}};
  b.variables = {{"y", "c", ValueShape::Scalar, 1}};
  b.traces.resize(2);
  b.traces[0].clock = "c";
  for (double y : ys) b.traces[0].valuations.push_back({Value{y}});
  b.traces[1].clock = "r";
  for (std::size_t i = 0; i < ys.size(); ++i)
    b.traces[1].valuations.push_back({});
  SyncMap cr{"c", "r", {}}, rc{"r", "c", {}};
  for (std::size_t i = 0; i < ys.size(); ++i) {
    cr.samples.push_back(static_cast<std::int64_t>(i));
    rc.samples.push_back(static_cast<std::int64_t>(i));
  }
  b.syncs = {cr, rc};
  return b;
}

Verdict eval_on(const SystemBehavior& b, const std::string& text) {
  Env env;
  env.behavior = &b;
  const GlobalPtr f = parse(text);
  bind_check(f, env);
  return eval_global(f, env);
}

}  // namespace

TEST_CASE("bounded eventually finds its witness") {
  const SystemBehavior b = y_trace({0, 1, 2});
  const Verdict v = eval_on(b, "@c. F[0,2] (y(0) > 1)");
  CHECK(v.value == Bool3::True);
  CHECK(v.witness.value() == 2);
}

TEST_CASE("unbounded modalities stay inconclusive on finite traces") {
  const SystemBehavior b = y_trace({0, 1, 2});
  CHECK(eval_on(b, "@c. G[0,inf] (y(0) >= 0)").value == Bool3::Unknown);
  CHECK(eval_on(b, "@c. F[0,inf] (y(0) > 5)").value == Bool3::Unknown);
  // ... but a witness or counterexample settles them
  CHECK(eval_on(b, "@c. F[0,inf] (y(0) > 1)").value == Bool3::True);
  const Verdict g = eval_on(b, "@c. G[0,inf] (y(0) < 2)");
  CHECK(g.value == Bool3::False);
  CHECK(g.witness.value() == 2);
}

TEST_CASE("Kleene combinations at the global level") {
  const SystemBehavior b = y_trace({0, 1, 2});
  // True leaf
  CHECK(eval_on(b, "@c. true").value == Bool3::True);
  // negation flips True/False and preserves Inconclusive
  CHECK(eval_on(b, "!(@c. true)").value == Bool3::False);
  CHECK(eval_on(b, "!(@c. G[0,inf] (y(0) >= 0))").value == Bool3::Unknown);
  // True && Inconclusive -> Inconclusive
  CHECK(eval_on(b, "(@c. true) && (@c. G[0,inf] (y(0) >= 0))").value ==
        Bool3::Unknown);
  // False && Inconclusive -> False
  CHECK(eval_on(b, "(@c. false) && (@c. G[0,inf] (y(0) >= 0))").value ==
        Bool3::False);
  // Inconclusive || True -> True
  CHECK(eval_on(b, "(@c. G[0,inf] (y(0) >= 0)) || (@c. true)").value ==
        Bool3::True);
}

TEST_CASE("window reaching past the trace end goes inconclusive") {
  const SystemBehavior b = y_trace({0, 1});
  // all recorded ticks satisfy, but the window wants tick 2
  CHECK(eval_on(b, "@c. G[0,2] (y(0) >= 0)").value == Bool3::Unknown);
  CHECK(eval_on(b, "@c. F[0,2] (y(0) > 5)").value == Bool3::Unknown);
  // a decided verdict inside the window still wins
  CHECK(eval_on(b, "@c. F[0,2] (y(0) > 0)").value == Bool3::True);
  CHECK(eval_on(b, "@c. G[0,2] (y(0) < 1)").value == Bool3::False);
}

TEST_CASE("negative offsets are inconclusive before tick 1") {
  const SystemBehavior b = y_trace({3, 4, 5});
  CHECK(eval_on(b, "@c. y(-1) >= 0").value == Bool3::Unknown);
  CHECK(eval_on(b, "@c. F[1,1] (y(-1) >= 0)").value == Bool3::True);
}

TEST_CASE("equality on reals uses the configured tolerance") {
  const SystemBehavior b = y_trace({1.0000000001, 2});
  CHECK(eval_on(b, "@c. y(0) = 1").value == Bool3::True);
  CHECK(eval_on(b, "@c. y(0) != 1").value == Bool3::False);
  CHECK(eval_on(b, "@c. y(1) = 1").value == Bool3::False);
}

TEST_CASE("bind errors: unknown names, vector misuse, missing syncs") {
  const SystemBehavior b = y_trace({0});
  Env env;
  env.behavior = &b;
  CHECK_THROWS_AS(bind_check(parse("@c. nope > 1"), env), BindError);
  CHECK_THROWS_AS(bind_check(parse("@q. y > 1"), env), BindError);
  CHECK_THROWS_AS(bind_check(parse("@c. Close(y, y; 0.1)"), env), BindError);
  // d^r with d unknown
  CHECK_THROWS_AS(bind_check(parse("@c. d^r(0) > 1"), env), BindError);
}

TEST_CASE("failing atoms are collected with their positions") {
  const SystemBehavior b = y_trace({1, 5, 1});
  Env env;
  env.behavior = &b;
  FailLog log;
  env.log = &log;
  const GlobalPtr f = parse("@c. G[0,inf] (y(0) <= 1)");
  bind_check(f, env);
  const Verdict v = eval_global(f, env);
  CHECK(v.value == Bool3::False);
  REQUIRE(!log.failures.empty());
  CHECK(log.failures[0].pos == 1);
  CHECK(log.failures[0].clock == "c");
}

TEST_CASE("verdict refinement is monotone under trace extension") {
  // Extending a recording appends ticks and sync samples; nothing already
  // recorded changes. Decided verdicts must survive the extension.
  Rng rng(1234);
  int flips = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const SystemBehavior shorter = testing::random_behavior(rng);
    const GlobalPtr f = testing::random_global(rng, 3);

    SystemBehavior longer = shorter;
    const std::int64_t extra = 1 + static_cast<std::int64_t>(rng.next_below(2));
    for (std::int64_t i = 0; i < extra; ++i) {
      longer.traces[0].valuations.push_back(
          {Value{static_cast<double>(rng.next_below(5))}});
      // extend c -> r with monotone in-range samples
      const std::int64_t last = longer.syncs[0].samples.empty()
                                    ? -1
                                    : longer.syncs[0].samples.back();
      const std::int64_t rmax = longer.traces[1].tick_count() - 1;
      longer.syncs[0].samples.push_back(
          std::min(rmax, last + static_cast<std::int64_t>(rng.next_below(2))));
    }
    longer.validate();

    Env env_long, env_short;
    env_long.behavior = &longer;
    env_short.behavior = &shorter;
    const Bool3 vl = eval_global(f, env_long).value;
    const Bool3 vs = eval_global(f, env_short).value;
    if (vs == Bool3::True && vl != Bool3::True) ++flips;
    if (vs == Bool3::False && vl != Bool3::False) ++flips;
  }
  CHECK(flips == 0);
}
