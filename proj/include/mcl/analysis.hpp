#pragma once

#include <string>
#include <vector>

#include "mcl/contract.hpp"
#include "mcl/fbl.hpp"
#include "mcl/pendulum.hpp"

namespace mcl {

/// Every timing/accuracy constant of the two-layer design in one place.
/// Times in seconds, deltas in state-space distance, D's in distance/s.
struct ParameterSet {
  // clock m (planner) and clock l (tracker)
  double T_min_m = 0.0, T_avg_m = 0.0, T_max_m = 0.0, T_fresh_m = 0.0;
  double T_min_l = 0.0, T_avg_l = 0.0, T_max_l = 0.0, T_fresh_l = 0.0;
  // accuracy budgets
  double delta_A_init_MPC = 0.0;
  double delta_G_init_MPC = 0.0;
  double delta_sensor_MPC = 0.0;
  double delta_sensor_Est = 0.0;
  double delta_dynamics_MPC = 0.0;
  double delta_dynamics_FL = 0.0;
  double delta_tracking_FL = 0.0;
  double delta_progress_MPC = 0.0;
  // variation bounds
  double D_x = 0.0;  // true state speed bound
  double D_d = 0.0;  // planned trajectory speed bound
  // tracking envelope declared for the design
  double M = 1.0;
  double lambda = 0.0;
  // plant/controller constants
  double U = 0.0, G = 0.0, L_f = 0.0, L_g = 0.0, A_cl_norm = 0.0;
  // derived disturbance bound (compute_delta_w)
  double delta_w = 0.0;
  // zero-cost box radii (containment check)
  double E_radius_min = 0.0;
};

struct MissingParameter : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstraintEntry {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs (>= 0 iff satisfied); strict checks note it
  bool satisfied = false;
};

struct ConstraintReport {
  std::vector<ConstraintEntry> entries;
  bool feasible = false;
  std::vector<std::string> warnings;

  const ConstraintEntry* find(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

struct DeltaTResult {
  double value = 0.0;
  bool negative_floor_arg = false;  // freshness exceeded T_min_m (flagged)
};

/// Maximum mismatch between one planner period and the tracker-accounted
/// elapsed time since the last plan receipt:
///   T_max_m - T_avg_l * floor((T_min_m - (T_fresh_m + T_fresh_l)) / T_max_l)
DeltaTResult delta_T_m(const ParameterSet& p);

/// Held-input disturbance bound
///   delta_w = T_max_l ((L_f + 2 L_g U + ||A_cl||) rho(T_max_l) + G U),
/// with rho(t) = U G t e^{(L_f + L_g U) t}.
double compute_delta_w(const ParameterSet& p);

/// Numerical counterpart of the t*rho(t) bound: integrates the Gronwall
/// integral equation z(t) = int_0^t [(L_f + L_g U) z + 2 U G s] ds.
double gronwall_numeric_bound(const ParameterSet& p, double t);

/// The six closed-form checks: sensor chain, initial handoff, inductive
/// handoff, progress ordering, the tracking-envelope gate, and the
/// containment of the tracking ball in the zero-cost box.
ConstraintReport check_constraints(const ParameterSet& p);

std::string report_text(const ConstraintReport& r);
std::string report_csv(const ConstraintReport& r);

/// Relaxed system-level contract (assumptions: initial closeness + bounded
/// variation; guarantee: eventually-always zero cost), emitted only when the
/// parameter checks are feasible. Slacks are annotated as comments.
Contract system_contract_summary(const ParameterSet& p);

/// Fills the derived members (D_x, plant constants, A_cl norm, delta_w)
/// from the plant and gains; declared fields are left untouched.
void derive_plant_constants(ParameterSet& p, const PendulumParams& plant,
                            const FBLGains& gains, double planning_input_bound);

}  // namespace mcl
