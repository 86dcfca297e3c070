#include <doctest.h>

#include "mcl/pendulum.hpp"
#include "mcl/rng.hpp"

using namespace mcl;

TEST_CASE("drift and actuation split") {
  PendulumParams p;
  auto [f0, g0] = drift_and_actuation(State(0, 0), p);
  CHECK(f0.norm() == 0.0);
  CHECK(g0(0) == 0.0);
  CHECK(g0(1) == 1.0);  // 1/(m L^2) with m = L = 1

  auto [f1, g1] = drift_and_actuation(State(M_PI / 6.0, 0), p);
  CHECK(f1(0) == 0.0);
  CHECK(f1(1) == doctest::Approx(4.905));  // (g_c/L) sin(pi/6)
  CHECK(g1 == g0);
}

TEST_CASE("upright is a fixed point of the integrator") {
  PendulumParams p;
  State x(0, 0);
  for (int i = 0; i < 1000; ++i) x = step(x, 0.0, 1e-3, p);
  CHECK(x.norm() == 0.0);
}

TEST_CASE("unforced energy drift below 1e-6 over one second") {
  PendulumParams p;
  State coarse(0.5, 0.0), fine = coarse;
  const double e0 = energy(coarse, p);
  for (int i = 0; i < 1000; ++i) coarse = step(coarse, 0.0, 1e-3, p);
  for (int i = 0; i < 10000; ++i) fine = step(fine, 0.0, 1e-4, p);
  CHECK(std::abs(energy(coarse, p) - e0) < 1e-6);
  CHECK((coarse - fine).norm() < 1e-6);  // h/10 reference integration
}

TEST_CASE("integration is reversible under zero input") {
  PendulumParams p;
  State x(0.4, -0.6);
  State fwd = x;
  for (int i = 0; i < 100; ++i) fwd = step(fwd, 0.0, 1e-3, p);
  State back = fwd;
  for (int i = 0; i < 100; ++i) back = step(back, 0.0, -1e-3, p);
  CHECK((back - x).norm() < 1e-10);
}

TEST_CASE("saturation clamps and reports") {
  PendulumParams p;
  bool saturated = false;
  const State a = step(State(0, 0), p.U + 5.0, 1e-3, p, &saturated);
  CHECK(saturated);
  const State b = step(State(0, 0), p.U, 1e-3, p, &saturated);
  CHECK_FALSE(saturated);
  CHECK(a == b);
}

TEST_CASE("lipschitz constants: closed forms and scaling") {
  PendulumParams p;
  const LipschitzConstants lc = lipschitz_constants(p);
  CHECK(lc.L_f == doctest::Approx(9.81));
  CHECK(lc.L_g == 0.0);
  CHECK(lc.G == doctest::Approx(1.0));

  PendulumParams heavy = p;
  heavy.m = 2.0;
  CHECK(lipschitz_constants(heavy).G == doctest::Approx(0.5));

  // theta_max independent: |cos| <= 1 globally
  PendulumParams wide = p;
  wide.theta_max = 3.0;
  CHECK(lipschitz_constants(wide).L_f == doctest::Approx(lc.L_f));
}

TEST_CASE("sampled Lipschitz bound of the drift holds") {
  PendulumParams p;
  const LipschitzConstants lc = lipschitz_constants(p);
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const State a(rng.next_in(-p.theta_max, p.theta_max),
                  rng.next_in(-p.omega_max, p.omega_max));
    const State b(rng.next_in(-p.theta_max, p.theta_max),
                  rng.next_in(-p.omega_max, p.omega_max));
    const State fa = drift_and_actuation(a, p).first;
    const State fb = drift_and_actuation(b, p).first;
    CHECK((fa - fb).norm() <= lc.L_f * (a - b).norm() + 1e-12);
  }
}

TEST_CASE("state speed bound dominates sampled speeds") {
  PendulumParams p;
  const double dx = state_speed_bound(p);
  Rng rng(18);
  for (int i = 0; i < 2000; ++i) {
    const State x(rng.next_in(-p.theta_max, p.theta_max),
                  rng.next_in(-p.omega_max, p.omega_max));
    const double u = rng.next_in(-p.U, p.U);
    auto [f, g] = drift_and_actuation(x, p);
    CHECK((f + g * u).norm() <= dx + 1e-12);
  }
}

TEST_CASE("integration blow-up raises NonFiniteState") {
  PendulumParams p;
  CHECK_THROWS_AS(step(State(1e308, 1e308), 0.0, 1e3, p), NonFiniteState);
}
