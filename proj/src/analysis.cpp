#include "mcl/analysis.hpp"

#include <cmath>

#include "mcl/parser.hpp"
#include "mcl/trace_io.hpp"

namespace mcl {

DeltaTResult delta_T_m(const ParameterSet& p) {
  if (!(p.T_max_l > 0.0))
    throw MissingParameter("delta_T_m: T_max_l must be positive");
  DeltaTResult out;
  const double arg = (p.T_min_m - (p.T_fresh_m + p.T_fresh_l)) / p.T_max_l;
  out.negative_floor_arg = arg < 0.0;
  out.value = p.T_max_m - p.T_avg_l * std::floor(arg);
  return out;
}

double compute_delta_w(const ParameterSet& p) {
  const double t = p.T_max_l;
  const double rho = p.U * p.G * t * std::exp((p.L_f + p.L_g * p.U) * t);
  return t * ((p.L_f + 2.0 * p.L_g * p.U + p.A_cl_norm) * rho + p.G * p.U);
}

double gronwall_numeric_bound(const ParameterSet& p, double t) {
  // z' = (L_f + L_g U) z + 2 U G s, z(0) = 0; RK4 on a fine fixed grid.
  const double a = p.L_f + p.L_g * p.U;
  const double c = 2.0 * p.U * p.G;
  const int n = 4000;
  const double dt = t / n;
  double z = 0.0, s = 0.0;
  auto f = [&](double zz, double ss) { return a * zz + c * ss; };
  for (int i = 0; i < n; ++i) {
    const double k1 = f(z, s);
    const double k2 = f(z + 0.5 * dt * k1, s + 0.5 * dt);
    const double k3 = f(z + 0.5 * dt * k2, s + 0.5 * dt);
    const double k4 = f(z + dt * k3, s + dt);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += dt;
  }
  return z;
}

ConstraintReport check_constraints(const ParameterSet& p) {
  ConstraintReport r;
  auto add = [&r](const std::string& id, double lhs, double rhs,
                  bool strict = false) {
    ConstraintEntry e;
    e.id = id;
    e.lhs = lhs;
    e.rhs = rhs;
    e.slack = rhs - lhs;
    e.satisfied = strict ? lhs < rhs : lhs <= rhs;
    r.entries.push_back(e);
  };

  if (!(p.T_max_l > 0.0) || !(p.T_max_m > 0.0))
    throw MissingParameter("check_constraints: clock bounds missing");

  const DeltaTResult dT = delta_T_m(p);
  if (dT.negative_floor_arg)
    r.warnings.push_back(
        "delta_T_m: freshness budget exceeds T_min_m (floor of a negative "
        "argument, computed as written)");

  // sensor estimate chain
  add("sensor-chain", p.delta_sensor_Est + p.T_fresh_m * p.D_x,
      p.delta_sensor_MPC);
  // initial handoff
  add("initial-handoff",
      p.delta_G_init_MPC + p.delta_A_init_MPC + p.D_x * p.T_fresh_l,
      p.delta_dynamics_FL);
  // inductive handoff
  add("inductive-handoff",
      p.delta_tracking_FL + p.delta_dynamics_MPC +
          (p.T_fresh_m + p.T_fresh_l) * p.D_x + p.D_d * dT.value,
      p.delta_dynamics_FL);
  // progress ordering
  add("progress-order", p.delta_dynamics_FL, p.delta_progress_MPC);
  // tracking envelope gate
  add("tracking-gate",
      p.delta_dynamics_FL * p.M * std::exp(-p.lambda * p.T_min_l) +
          p.T_max_l * p.delta_w,
      p.delta_tracking_FL);
  // tracking ball inside the zero-cost box
  add("tracking-containment", p.delta_tracking_FL, p.E_radius_min,
      /*strict=*/true);

  r.feasible = true;
  for (const auto& e : r.entries) r.feasible = r.feasible && e.satisfied;
  return r;
}

std::string report_text(const ConstraintReport& r) {
  std::string out;
  for (const auto& e : r.entries) {
    out += e.satisfied ? "[ok]   " : "[FAIL] ";
    out += e.id + ": lhs=" + format_double(e.lhs) +
           " rhs=" + format_double(e.rhs) +
           " slack=" + format_double(e.slack) + "\n";
  }
  for (const auto& w : r.warnings) out += "[warn] " + w + "\n";
  out += r.feasible ? "feasible: yes\n" : "feasible: no\n";
  return out;
}

std::string report_csv(const ConstraintReport& r) {
  std::string out = "id,lhs,rhs,slack,satisfied\n";
  for (const auto& e : r.entries)
    out += e.id + "," + format_double(e.lhs) + "," + format_double(e.rhs) +
           "," + format_double(e.slack) + "," + (e.satisfied ? "1" : "0") +
           "\n";
  return out;
}

Contract system_contract_summary(const ParameterSet& p) {
  const ConstraintReport r = check_constraints(p);
  if (!r.feasible) {
    std::string bad;
    for (const auto& e : r.entries)
      if (!e.satisfied) bad += (bad.empty() ? "" : ", ") + e.id;
    throw InfeasibleParameters(
        "system contract refused, violated constraints: " + bad);
  }
  Contract c;
  c.name = "C_Sys_relaxed";
  c.params["delta_A_init_MPC"] = p.delta_A_init_MPC;
  c.params["D_x"] = p.D_x;
  c.assumptions = parse(
      "(@m. Close(x, x_i; delta_A_init_MPC)) && "
      "(@m. G[0,inf] BoundedVariation(x; D_x))");
  c.guarantees = parse("@l. F[0,inf] G[0,inf] CostZeroInflated(x; 0.0)");
  c.comment = "relaxed system-level contract; discharged constraint slacks:";
  for (const auto& e : r.entries)
    c.comment += "\n  " + e.id + " slack " + format_double(e.slack);
  return c;
}

void derive_plant_constants(ParameterSet& p, const PendulumParams& plant,
                            const FBLGains& gains,
                            double planning_input_bound) {
  const LipschitzConstants lip = lipschitz_constants(plant);
  p.U = plant.U;
  p.G = lip.G;
  p.L_f = lip.L_f;
  p.L_g = lip.L_g;
  p.D_x = state_speed_bound(plant);
  // Planned trajectories obey the linearized model within the planning
  // boxes: |theta_ddot_d| <= (g_c/L) theta_max + u_plan / (m L^2). The 1.05
  // covers the spline fit between knots.
  const double acc = (plant.g_c / plant.L) * plant.theta_max +
                     planning_input_bound / plant.inertia();
  p.D_d =
      1.05 * std::sqrt(plant.omega_max * plant.omega_max + acc * acc);
  // ||A_cl|| (spectral norm of [[0,1],[-K1,-K2]]).
  const Eigen::Matrix2d a = gains.a_cl();
  const Eigen::Matrix2d g = a.transpose() * a;
  const double tr = g.trace();
  const double det = g.determinant();
  p.A_cl_norm = std::sqrt(tr / 2.0 + std::sqrt(std::max(0.0, tr * tr / 4.0 - det)));
  p.delta_w = compute_delta_w(p);
}

}  // namespace mcl
