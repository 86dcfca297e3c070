#include <doctest.h>

#include "mcl/eval.hpp"
#include "mcl/parser.hpp"
#include "mcl/predicates.hpp"
#include "mcl/rng.hpp"

using namespace mcl;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

CostFunction unit_cost(double r1 = 0.05, double r2 = 0.05, double q = 0.01) {
  return CostFunction(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(),
                      Eigen::Vector2d(r1, r2), q);
}

// x (vector on r) switching value at grid 100, xhat (vector on l); two l
// ticks observing grid 0 and grid 100 (0.1 s apart).
SystemBehavior sensor_fixture(Eigen::Vector2d x0, Eigen::Vector2d x1,
                              Eigen::Vector2d xh0, Eigen::Vector2d xh1) {
  SystemBehavior b;
  b.grid_step = 1e-3;
  b.clocks = {{"l", ClockKind::Discrete}, {"r", ClockKind::Physical}};
  b.variables = {{"xhat", "l", ValueShape::Vector, 2},
                 {"x", "r", ValueShape::Vector, 2}};
  b.traces.resize(2);
  b.traces[0].clock = "l";
  b.traces[0].valuations = {{Value{Eigen::VectorXd(xh0)}},
                            {Value{Eigen::VectorXd(xh1)}}};
  b.traces[1].clock = "r";
  for (int i = 0; i <= 100; ++i)
    b.traces[1].valuations.push_back(
        {Value{Eigen::VectorXd(i < 100 ? x0 : x1)}});
  b.syncs = {{"l", "r", {0, 100}}, {"r", "l", {}}};
  for (int i = 0; i <= 100; ++i)
    b.syncs[1].samples.push_back(i < 100 ? 0 : 1);
  b.validate();
  return b;
}

}  // namespace

TEST_CASE("close: exact zero, 3-4-5, dimension mismatch") {
  CHECK(close_points(vec2(1, 0), vec2(1, 0), 0.0));
  CHECK(close_points(vec2(0, 0), vec2(3, 4), 5.0));
  CHECK_FALSE(close_points(vec2(0, 0), vec2(3, 4), 4.99));
  Eigen::VectorXd three(3);
  three << 1, 2, 3;
  CHECK_THROWS_AS(close_points(vec2(0, 0), three, 1.0), DimensionMismatch);
}

TEST_CASE("close is symmetric and monotone in delta") {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const Eigen::VectorXd a = vec2(rng.next_in(-2, 2), rng.next_in(-2, 2));
    const Eigen::VectorXd b = vec2(rng.next_in(-2, 2), rng.next_in(-2, 2));
    const double d = rng.next_in(0, 3);
    CHECK(close_points(a, b, d) == close_points(b, a, d));
    if (close_points(a, b, d)) CHECK(close_points(a, b, d + 0.5));
    CHECK(close_points(a, a, 0.0));
  }
}

TEST_CASE("cost: zero on the box including its boundary, ceil outside") {
  const CostFunction cf = unit_cost();
  CHECK(cf.cost(Eigen::Vector2d(0, 0)) == 0);
  CHECK(cf.cost(Eigen::Vector2d(0.05, 0.0)) == 0);  // closed boundary
  // V(p) = 2.5 q -> ceil = 3
  const double r = std::sqrt(0.025);
  CHECK(cf.cost(Eigen::Vector2d(r, 0)) == 3);
  // positive anywhere outside, zero exactly on the box
  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    const Eigen::Vector2d p(rng.next_in(-1, 1), rng.next_in(-1, 1));
    const bool inside = std::abs(p(0)) <= 0.05 && std::abs(p(1)) <= 0.05;
    CHECK((cf.cost(p) == 0) == inside);
    CHECK(cf.cost(p) >= 0);
  }
}

TEST_CASE("inflate_cost_zero: shrink test on trajectories") {
  const CostFunction cf = unit_cost(0.1, 0.1);
  const Trajectory at_goal =
      Trajectory::fit_knots({Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0)},
                            0.5);
  CHECK(inflate_cost_zero(cf, at_goal, 0.05, 1e-2));
  CHECK(inflate_cost_zero(cf, at_goal, 0.0, 1e-2));

  // trajectory resting on the boundary: fine uninflated, fails inflated
  const Trajectory boundary = Trajectory::fit_knots(
      {Eigen::Vector2d(0.1, 0), Eigen::Vector2d(0.1, 0)}, 0.5);
  CHECK(inflate_cost_zero(cf, boundary, 0.0, 1e-2));
  CHECK_FALSE(inflate_cost_zero(cf, boundary, 0.02, 1e-2));

  // monotone in delta
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const double th = rng.next_in(-0.12, 0.12);
    const Trajectory t = Trajectory::fit_knots(
        {Eigen::Vector2d(th, 0), Eigen::Vector2d(th / 2, 0)}, 0.5);
    const double d1 = rng.next_in(0, 0.1);
    const double d2 = rng.next_in(0, d1);
    if (inflate_cost_zero(cf, t, d1, 1e-2))
      CHECK(inflate_cost_zero(cf, t, d2, 1e-2));
  }
}

TEST_CASE("respect_dynamics: equilibrium, torque demand, box exit") {
  PendulumParams plant;
  const Trajectory zero =
      Trajectory::fit_knots({Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0)},
                            0.5);
  CHECK(respect_dynamics(zero, plant, 1e-3));

  // theta_ddot demand of 2U/(mL^2) at upright needs |u_ff| about 2U
  const double dt = 0.1;
  const double accel = 2.0 * plant.U / plant.inertia();
  const Trajectory greedy = Trajectory::fit_knots(
      {Eigen::Vector2d(0, 0),
       Eigen::Vector2d(0.5 * accel * dt * dt, accel * dt)},
      dt);
  CHECK_FALSE(respect_dynamics(greedy, plant, 1e-3));

  const Trajectory outside = Trajectory::fit_knots(
      {Eigen::Vector2d(plant.theta_max + 0.1, 0),
       Eigen::Vector2d(plant.theta_max + 0.1, 0)},
      0.5);
  CHECK_FALSE(respect_dynamics(outside, plant, 1e-3));
}

TEST_CASE("respect_dynamics never flips false->true under grid refinement") {
  PendulumParams plant;
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    std::vector<Eigen::Vector2d> knots;
    for (int k = 0; k < 4; ++k)
      knots.push_back(
          Eigen::Vector2d(rng.next_in(-0.9, 0.9), rng.next_in(-4.5, 4.5)));
    const Trajectory t = Trajectory::fit_knots(knots, 0.2);
    if (respect_dynamics(t, plant, 1e-3))  // fine grid ok
      CHECK(respect_dynamics(t, plant, 4e-3));  // coarse grid must agree
  }
}

TEST_CASE("Close atom over the sensor fixture, inconclusive past the end") {
  const SystemBehavior b = sensor_fixture(
      Eigen::Vector2d(0.5, 0.0), Eigen::Vector2d(0.4, 0.0),
      Eigen::Vector2d(0.501, 0.0), Eigen::Vector2d(0.6, 0.0));
  const PredicateRegistry reg =
      make_standard_registry(PendulumParams{}, unit_cost());
  Env env;
  env.behavior = &b;
  env.predicates = &reg;
  env.params["d"] = 0.01;

  GlobalPtr ok = parse("@l. Close(xhat, x; d)");
  bind_check(ok, env);
  CHECK(eval_global(ok, env).value == Bool3::True);

  GlobalPtr all = parse("@l. G[0,inf] (Close(xhat, x; d))");
  bind_check(all, env);
  const Verdict v = eval_global(all, env);  // tick 1 is 0.2 apart
  CHECK(v.value == Bool3::False);
  CHECK(v.witness.value() == 1);

  GlobalPtr past = parse("@l. F[2,3] (Close(xhat, x; d))");
  bind_check(past, env);
  CHECK(eval_global(past, env).value == Bool3::Unknown);
}

TEST_CASE("BoundedVariation: constant, ratio threshold, final tick") {
  // x jumps 1.0 over 0.1 s (rate 10): the bound must be at least 10
  const SystemBehavior b = sensor_fixture(
      Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0),
      Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0));
  const PredicateRegistry reg =
      make_standard_registry(PendulumParams{}, unit_cost());

  auto bv_at0 = [&](const SystemBehavior& beh, double d) {
    Env e;
    e.behavior = &beh;
    e.predicates = &reg;
    e.params["D"] = d;
    GlobalPtr f = parse("@l. BoundedVariation(x; D)");
    bind_check(f, e);
    return eval_global(f, e).value;
  };
  CHECK(bv_at0(b, 10.1) == Bool3::True);
  CHECK(bv_at0(b, 9.0) == Bool3::False);

  // constant signal passes with any D >= 0
  const SystemBehavior c = sensor_fixture(
      Eigen::Vector2d(0.3, 0.0), Eigen::Vector2d(0.3, 0.0),
      Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 0));
  CHECK(bv_at0(c, 0.0) == Bool3::True);

  // the last tick has no successor observation
  Env env_c;
  env_c.behavior = &c;
  env_c.predicates = &reg;
  env_c.params["D"] = 0.0;
  GlobalPtr last = parse("@l. F[1,1] (BoundedVariation(x; D))");
  bind_check(last, env_c);
  CHECK(eval_global(last, env_c).value == Bool3::Unknown);
}

TEST_CASE("BoundedVariation on a trajectory variable bounds its time slope") {
  SystemBehavior b;
  b.grid_step = 1e-2;
  b.clocks = {{"m", ClockKind::Discrete}, {"r", ClockKind::Physical}};
  b.variables = {{"xd", "m", ValueShape::TrajectoryShape, 1}};
  b.traces.resize(2);
  b.traces[0].clock = "m";
  // ramp: theta from 0.4 to 0 over 1 s, slope -0.4, omega constant -0.4
  const Trajectory ramp = Trajectory::fit_knots(
      {Eigen::Vector2d(0.4, -0.4), Eigen::Vector2d(0.0, -0.4)}, 1.0);
  b.traces[0].valuations = {{Value{ramp}}};
  b.traces[1].clock = "r";
  b.traces[1].valuations = {{}};
  b.syncs = {{"m", "r", {0}}, {"r", "m", {0}}};

  const PredicateRegistry reg =
      make_standard_registry(PendulumParams{}, unit_cost());
  auto bv = [&](double d) {
    Env e;
    e.behavior = &b;
    e.predicates = &reg;
    e.params["D"] = d;
    GlobalPtr f = parse("@m. BoundedVariation(xd; D)");
    bind_check(f, e);
    return eval_global(f, e).value;
  };
  CHECK(bv(0.5) == Bool3::True);    // slope magnitude 0.4
  CHECK(bv(0.3) == Bool3::False);
}

TEST_CASE("cost decrease and zero-inflation predicates through atoms") {
  // xd plans at two m ticks: first far from goal, second at goal
  SystemBehavior b;
  b.grid_step = 1e-2;
  b.clocks = {{"m", ClockKind::Discrete}, {"r", ClockKind::Physical}};
  b.variables = {{"xd", "m", ValueShape::TrajectoryShape, 1}};
  b.traces.resize(2);
  b.traces[0].clock = "m";
  const Trajectory far = Trajectory::fit_knots(
      {Eigen::Vector2d(0.5, 0), Eigen::Vector2d(0.4, 0)}, 0.5);
  const Trajectory home = Trajectory::fit_knots(
      {Eigen::Vector2d(0.01, 0), Eigen::Vector2d(0.0, 0)}, 0.5);
  b.traces[0].valuations = {{Value{far}}, {Value{home}}};
  b.traces[1].clock = "r";
  b.traces[1].valuations = {{}};
  b.syncs = {{"m", "r", {0, 0}}, {"r", "m", {1}}};

  const CostFunction cf = unit_cost(0.1, 0.1);
  const PredicateRegistry reg =
      make_standard_registry(PendulumParams{}, cf);
  Env env;
  env.behavior = &b;
  env.predicates = &reg;
  env.params["dp"] = 0.05;

  GlobalPtr dec = parse("@m. Cost(xd(0)(0.0), xd(1)(0.0);)");
  bind_check(dec, env);
  CHECK(eval_global(dec, env).value == Bool3::True);

  GlobalPtr zi = parse("@m. F[1,1] (CostZeroInflated(xd; dp))");
  bind_check(zi, env);
  CHECK(eval_global(zi, env).value == Bool3::True);

  GlobalPtr zi0 = parse("@m. CostZeroInflated(xd; dp)");
  bind_check(zi0, env);
  CHECK(eval_global(zi0, env).value == Bool3::False);
}
