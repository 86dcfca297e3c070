#include "mcl/executive.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mcl/rng.hpp"
#include "mcl/trace_io.hpp"

namespace mcl {

namespace {

std::int64_t grid_steps_of(double seconds, double h, const char* what) {
  const double raw = seconds / h;
  const std::int64_t k = std::llround(raw);
  if (std::abs(raw - static_cast<double>(k)) > 1e-6)
    throw ScenarioInvalid(std::string(what) +
                          " does not sit on the integration grid");
  return k;
}

void check_clock(const ClockConfig& c, double h, const char* name) {
  if (!(c.t_min > 0.0 && c.t_min <= c.t_avg && c.t_avg <= c.t_max))
    throw ScenarioInvalid(std::string("clock ") + name +
                          ": need 0 < T_min <= T_avg <= T_max");
  if (grid_steps_of(c.t_min, h, name) < 1)
    throw ScenarioInvalid(std::string("clock ") + name +
                          ": period below one grid step");
  grid_steps_of(c.t_avg, h, name);
  grid_steps_of(c.t_max, h, name);
}

}  // namespace

void Scenario::validate() const {
  if (h <= 0.0) throw ScenarioInvalid("grid step must be positive");
  if (duration < 3.0 * mpc.T)
    throw ScenarioInvalid("duration must cover at least 3 MPC horizons");
  check_clock(clock_m, h, "m");
  check_clock(clock_l, h, "l");
  if (network.m_to_l_min < 0.0 || network.l_to_m_min < 0.0 ||
      network.m_to_l_max < network.m_to_l_min ||
      network.l_to_m_max < network.l_to_m_min)
    throw ScenarioInvalid("network delays must be ordered and nonnegative");
  if (init_perturbation < 0.0 || sensor_noise < 0.0)
    throw ScenarioInvalid("noise bounds must be nonnegative");
  if (mpc.dt() < h) throw ScenarioInvalid("MPC step below the grid step");
}

namespace {

struct TrajMsg {
  std::int64_t deliver_k;
  std::int64_t m_index;
  std::shared_ptr<const Trajectory> traj;
};

struct EstMsg {
  std::int64_t deliver_k;
  std::int64_t l_index;
  State value;
};

class PeriodSampler {
 public:
  PeriodSampler(const ClockConfig& cfg, double h)
      : cfg_(cfg), h_(h), rng_(cfg.seed) {
    min_steps_ = grid_steps_of(cfg.t_min, h, "clock");
    max_steps_ = grid_steps_of(cfg.t_max, h, "clock");
    avg_steps_ = grid_steps_of(cfg.t_avg, h, "clock");
  }

  std::int64_t next() {
    if (!cfg_.jitter || min_steps_ == max_steps_) return avg_steps_;
    const double p = rng_.next_in(cfg_.t_min, cfg_.t_max);
    return std::clamp(static_cast<std::int64_t>(std::llround(p / h_)),
                      min_steps_, max_steps_);
  }

 private:
  ClockConfig cfg_;
  double h_;
  Rng rng_;
  std::int64_t min_steps_, max_steps_, avg_steps_;
};

class DelaySampler {
 public:
  DelaySampler(double lo, double hi, Rng* rng, double h)
      : lo_(lo), hi_(hi), rng_(rng), h_(h) {}
  std::int64_t next() {
    const double d = hi_ > lo_ ? rng_->next_in(lo_, hi_) : lo_;
    return std::max<std::int64_t>(0, std::llround(d / h_));
  }

 private:
  double lo_, hi_;
  Rng* rng_;
  double h_;
};

RunResult run_impl(const Scenario& sc, bool continuous_control) {
  sc.validate();
  RunResult out;

  const double h = sc.h;
  const std::int64_t grid_count = grid_steps_of(sc.duration, h, "duration");
  const MPCController mpc(sc.mpc, sc.plant);

  Rng rng_init(sc.seed_init);
  Rng rng_est(sc.seed_est);
  Rng rng_net(sc.network.seed);
  PeriodSampler periods_m(sc.clock_m, h);
  PeriodSampler periods_l(sc.clock_l, h);
  DelaySampler delay_ml(sc.network.m_to_l_min, sc.network.m_to_l_max,
                        &rng_net, h);
  DelaySampler delay_lm(sc.network.l_to_m_min, sc.network.l_to_m_max,
                        &rng_net, h);

  // Initial state: commanded x_i plus a bounded perturbation draw.
  State x = estimate(sc.x_i, sc.init_perturbation, rng_init);
  // Boot estimate, used only if no measurement reached m before its tick 0.
  const State boot_estimate = estimate(x, sc.sensor_noise, rng_est);

  // Host state.
  std::int64_t l_index = 0, m_index = 0;
  std::int64_t next_l = 0, next_m = 0;
  std::int64_t latest_m_at_l = -1;  // tau_l^m
  std::shared_ptr<const Trajectory> plan_at_l;
  std::int64_t upd = 0;
  std::int64_t latest_l_at_m = -1;  // tau_m^l
  State latest_estimate = boot_estimate;
  bool have_estimate = false;
  std::shared_ptr<const Trajectory> last_plan_at_m;  // for infeasible holds
  double u_held = 0.0;
  double u_applied = 0.0;

  std::deque<TrajMsg> traj_msgs;
  std::deque<EstMsg> est_msgs;

  // Behavior skeleton. Variable declaration order fixes valuation rows.
  SystemBehavior& beh = out.behavior;
  beh.grid_step = h;
  beh.clocks = {{"m", ClockKind::Discrete},
                {"l", ClockKind::Discrete},
                {"r", ClockKind::Physical}};
  beh.variables = {{"xd", "m", ValueShape::TrajectoryShape, 1},
                   {"x_i", "m", ValueShape::Vector, 2},
                   {"xhat", "l", ValueShape::Vector, 2},
                   {"u", "l", ValueShape::Scalar, 1},
                   {"upd", "l", ValueShape::Scalar, 1},
                   {"x", "r", ValueShape::Vector, 2}};
  beh.traces.resize(3);
  beh.traces[0].clock = "m";
  beh.traces[1].clock = "l";
  beh.traces[2].clock = "r";
  SyncMap sm_ml{"m", "l", {}}, sm_mr{"m", "r", {}};
  SyncMap sm_lm{"l", "m", {}}, sm_lr{"l", "r", {}};
  SyncMap sm_rm{"r", "m", {}}, sm_rl{"r", "l", {}};

  std::string csv =
      "t_r,theta,theta_dot,u,theta_d,e_norm,m_tick,l_tick,upd\n";
  out.grid_states.reserve(static_cast<std::size_t>(grid_count) + 1);

  const double t_avg_l = sc.clock_l.t_avg;

  for (std::int64_t k = 0; k <= grid_count; ++k) {
    // --- low-level tick (consumer first on shared instants) ---
    if (k == next_l) {
      bool receipt = false;
      while (!traj_msgs.empty() && traj_msgs.front().deliver_k <= k) {
        if (traj_msgs.front().m_index > latest_m_at_l) {
          latest_m_at_l = traj_msgs.front().m_index;
          plan_at_l = traj_msgs.front().traj;
          receipt = true;
        }
        traj_msgs.pop_front();
      }
      if (receipt) upd = l_index;

      const State xhat = estimate(x, sc.sensor_noise, rng_est);
      est_msgs.push_back({k + delay_lm.next(), l_index, xhat});

      double play_t = 0.0;
      if (plan_at_l) {
        play_t = t_avg_l * static_cast<double>(l_index - upd);
        const FBLCommand cmd =
            fbl_control(x, *plan_at_l, play_t, sc.gains, sc.plant);
        u_held = cmd.torque;
        if (cmd.expired) ++out.stats.expired_playbacks;
      } else {
        u_held = 0.0;
      }

      LTickRecord rec;
      rec.grid_k = k;
      rec.l_index = l_index;
      rec.upd = upd;
      rec.traj = plan_at_l;
      rec.play_t = play_t;
      rec.receipt = receipt;
      rec.u_applied = std::clamp(u_held, -sc.plant.U, sc.plant.U);
      out.l_ticks.push_back(rec);

      Eigen::VectorXd xhat_v(2);
      xhat_v << xhat(0), xhat(1);
      beh.traces[1].valuations.push_back(
          {Value{xhat_v}, Value{rec.u_applied},
           Value{static_cast<double>(upd)}});
      sm_lm.samples.push_back(latest_m_at_l);
      sm_lr.samples.push_back(k);

      ++l_index;
      next_l += periods_l.next();
    }

    // --- MPC tick ---
    if (k == next_m) {
      while (!est_msgs.empty() && est_msgs.front().deliver_k <= k) {
        latest_l_at_m = std::max(latest_l_at_m, est_msgs.front().l_index);
        latest_estimate = est_msgs.front().value;
        have_estimate = true;
        est_msgs.pop_front();
      }
      const State est_used = have_estimate ? latest_estimate : boot_estimate;
      const MPCResult res = mpc.solve(est_used);

      MSolveRecord rec;
      rec.grid_k = k;
      rec.m_index = m_index;
      rec.feasible = res.feasible;
      if (res.feasible) {
        rec.start_cost = res.start_cost;
        rec.kkt = res.qp.kkt;
        rec.iterations = res.qp.iterations;
        auto plan = std::make_shared<Trajectory>(res.trajectory);
        last_plan_at_m = plan;
        traj_msgs.push_back({k + delay_ml.next(), m_index, plan});
      } else {
        ++out.stats.infeasible_solves;
      }
      out.m_solves.push_back(rec);

      Eigen::VectorXd xi_v(2);
      xi_v << sc.x_i(0), sc.x_i(1);
      beh.traces[0].valuations.push_back(
          {Value{last_plan_at_m ? *last_plan_at_m : Trajectory{}},
           Value{xi_v}});
      sm_ml.samples.push_back(latest_l_at_m);
      sm_mr.samples.push_back(k);

      ++m_index;
      next_m += periods_m.next();
    }

    // --- physical grid record ---
    Eigen::VectorXd x_v(2);
    x_v << x(0), x(1);
    beh.traces[2].valuations.push_back({Value{x_v}});
    sm_rm.samples.push_back(m_index - 1);
    sm_rl.samples.push_back(l_index - 1);
    out.grid_states.push_back(x);

    // Torque for the upcoming interval (held, or recomputed per grid step
    // for the continuous-control reference).
    double u_cmd = u_held;
    if (continuous_control && plan_at_l && !out.l_ticks.empty()) {
      const auto& lt = out.l_ticks.back();
      const double tt = lt.play_t + static_cast<double>(k - lt.grid_k) * h;
      u_cmd = fbl_control(x, *plan_at_l, tt, sc.gains, sc.plant).torque;
    }
    u_applied = std::clamp(u_cmd, -sc.plant.U, sc.plant.U);

    double theta_d = 0.0, e_norm = 0.0;
    if (!out.l_ticks.empty() && out.l_ticks.back().traj) {
      const auto& lt = out.l_ticks.back();
      const double tt =
          lt.play_t + static_cast<double>(k - lt.grid_k) * h;
      const Eigen::Vector2d ref = lt.traj->state(std::min(tt, lt.traj->horizon()));
      theta_d = ref(0);
      e_norm = (x - ref).norm();
    }
    csv += format_double(static_cast<double>(k) * h) + "," +
           format_double(x(0)) + "," + format_double(x(1)) + "," +
           format_double(u_applied) + "," + format_double(theta_d) + "," +
           format_double(e_norm) + "," + std::to_string(m_index - 1) + "," +
           std::to_string(l_index - 1) + "," + std::to_string(upd) + "\n";

    // --- integrate one grid step ---
    if (k < grid_count) {
      bool saturated = false;
      x = step(x, u_cmd, h, sc.plant, &saturated);
      if (saturated) ++out.stats.saturation_events;
    }
  }

  beh.syncs = {sm_ml, sm_mr, sm_lm, sm_lr, sm_rm, sm_rl};
  beh.validate();
  out.csv = std::move(csv);
  return out;
}

}  // namespace

RunResult run(const Scenario& sc) { return run_impl(sc, false); }

RunResult run_reference_continuous(const Scenario& sc) {
  return run_impl(sc, true);
}

GronwallCheck check_zoh_gronwall(const Scenario& sc, const RunResult& r) {
  GronwallCheck out;
  const LipschitzConstants lip = lipschitz_constants(sc.plant);
  const double h = sc.h;
  for (std::size_t i = 0; i + 1 < r.l_ticks.size(); ++i) {
    const LTickRecord& lt = r.l_ticks[i];
    if (!lt.traj) continue;
    ++out.intervals;
    const std::int64_t k0 = lt.grid_k;
    const std::int64_t k1 = r.l_ticks[i + 1].grid_k;
    State xp = r.grid_states[static_cast<std::size_t>(k0)];
    for (std::int64_t k = k0; k < k1; ++k) {
      // continuous-control reference within the interval
      const double tt = lt.play_t + static_cast<double>(k - k0) * h;
      const double up =
          fbl_control(xp, *lt.traj, tt, sc.gains, sc.plant).torque;
      xp = step(xp, up, h, sc.plant);
      const double t = static_cast<double>(k + 1 - k0) * h;
      const double bound = sc.plant.U * lip.G * t * t *
                           std::exp((lip.L_f + lip.L_g * sc.plant.U) * t);
      const double measured =
          (r.grid_states[static_cast<std::size_t>(k + 1)] - xp).norm();
      if (bound > 0.0)
        out.worst_margin = std::max(out.worst_margin, measured / bound);
      if (measured > bound) ++out.violations;
    }
  }
  return out;
}

EnvelopeCheck check_tracking_envelope(const Scenario& sc, const RunResult& r,
                                      double M, double lambda,
                                      double delta_w) {
  EnvelopeCheck out;
  double e0 = 0.0;
  bool in_segment = false;
  for (const LTickRecord& lt : r.l_ticks) {
    if (!lt.traj) continue;
    const State& x = r.grid_states[static_cast<std::size_t>(lt.grid_k)];
    if (lt.receipt) {
      e0 = (x - lt.traj->state(0.0)).norm();
      in_segment = true;
    }
    if (!in_segment) continue;
    const double t = lt.play_t;
    const Eigen::Vector2d ref = lt.traj->state(std::min(t, lt.traj->horizon()));
    const double err = (x - ref).norm();
    const double bound =
        e0 * M * std::exp(-lambda * t) + sc.clock_l.t_max * delta_w;
    ++out.checks;
    if (bound > 0.0) out.worst_margin = std::max(out.worst_margin, err / bound);
    if (err > bound) ++out.violations;
  }
  return out;
}

}  // namespace mcl
