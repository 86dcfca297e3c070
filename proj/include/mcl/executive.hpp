#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mcl/behavior.hpp"
#include "mcl/fbl.hpp"
#include "mcl/mpc.hpp"
#include "mcl/pendulum.hpp"
#include "mcl/predicates.hpp"

namespace mcl {

struct ClockConfig {
  double t_min = 0.001;
  double t_avg = 0.001;
  double t_max = 0.001;
  bool jitter = false;  // uniform period in [t_min, t_max], grid-quantized
  std::uint64_t seed = 0;
};

struct NetworkConfig {
  // Constant delay, or seeded-uniform in [min, max] when max > min.
  double m_to_l_min = 0.001;
  double m_to_l_max = 0.001;
  double l_to_m_min = 0.0;
  double l_to_m_max = 0.0;
  std::uint64_t seed = 0;
};

struct Scenario {
  std::string name = "scenario";
  PendulumParams plant;
  FBLGains gains;
  MPCConfig mpc;
  Eigen::Vector2d cost_radii{0.6, 0.6};  // cost-zero box E around the goal
  double cost_quantum = 0.01;
  ClockConfig clock_m{0.004, 0.004, 0.004, false, 11};
  ClockConfig clock_l{0.002, 0.002, 0.002, false, 12};
  NetworkConfig network;
  double h = 1e-3;
  double duration = 10.0;
  Eigen::Vector2d x_i{0.65, 0.0};
  double init_perturbation = 0.01;  // |x(0) - x_i| draw radius
  double sensor_noise = 0.002;      // delta_sensor_Est
  std::uint64_t seed_init = 1;
  std::uint64_t seed_est = 2;

  /// Clock periods must sit on the grid, duration must cover three MPC
  /// horizons, bounds must be ordered. Throws std::runtime_error.
  void validate() const;
};

struct ScenarioInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LTickRecord {
  std::int64_t grid_k = 0;
  std::int64_t l_index = 0;
  std::int64_t upd = 0;
  std::shared_ptr<const Trajectory> traj;  // plan in use (null before first)
  double play_t = 0.0;                     // playback time handed to the FBL
  double u_applied = 0.0;
  bool receipt = false;  // a new plan became visible at this tick
};

struct MSolveRecord {
  std::int64_t grid_k = 0;
  std::int64_t m_index = 0;
  bool feasible = false;
  double start_cost = 0.0;
  KKTResiduals kkt;
  int iterations = 0;
};

struct RunStats {
  int saturation_events = 0;
  int infeasible_solves = 0;
  int expired_playbacks = 0;
};

struct RunResult {
  SystemBehavior behavior;
  std::vector<State> grid_states;  // x at every grid index
  std::vector<LTickRecord> l_ticks;
  std::vector<MSolveRecord> m_solves;
  RunStats stats;
  std::string csv;  // t_r, theta, theta_dot, u, theta_d, e_norm, m_tick,
                    // l_tick, upd
};

/// Deterministic event loop: fires l and m ticks with configured jitter,
/// routes messages with configured delays, maintains upd, integrates the
/// plant on the grid, and records the full multiclock behavior.
RunResult run(const Scenario& sc);

/// Same scenario and message timeline, but the tracking control is
/// recomputed at every grid step (the continuous-control reference x').
RunResult run_reference_continuous(const Scenario& sc);

struct GronwallCheck {
  int intervals = 0;
  int violations = 0;
  double worst_margin = 0.0;  // max measured/bound ratio
};

/// Per low-level interval: re-integrates the continuous-control reference
/// from the recorded interval start and compares the held-input deviation
/// against U G t^2 e^{(L_f + L_g U) t}.
GronwallCheck check_zoh_gronwall(const Scenario& sc, const RunResult& r);

struct EnvelopeCheck {
  int checks = 0;
  int violations = 0;
  double worst_margin = 0.0;
};

/// Tracking envelope ||e(t)|| <= ||e(0)|| M e^{-lambda t} + T_max^l delta_w
/// at every l tick within each plan segment (from each receipt).
EnvelopeCheck check_tracking_envelope(const Scenario& sc, const RunResult& r,
                                      double M, double lambda, double delta_w);

}  // namespace mcl
