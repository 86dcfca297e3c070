#include "mcl/scenario_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "mcl/trace_io.hpp"

namespace mcl {

namespace {

using KeyMap = std::map<std::string, std::map<std::string, double>>;

KeyMap parse_sections(const std::string& text) {
  KeyMap out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto pos = line.find("//"); pos != std::string::npos)
      line = line.substr(0, pos);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head.front() == '[') {
      if (head.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": bad section header");
      section = head.substr(1, head.size() - 2);
      continue;
    }
    std::string eq;
    double value;
    if (!(ls >> eq >> value) || eq != "=")
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected 'name = value'");
    out[section][head] = value;
  }
  return out;
}

class Fields {
 public:
  Fields(const KeyMap& km, std::string section)
      : km_(km), section_(std::move(section)) {}

  double get(const std::string& key, double fallback) const {
    auto s = km_.find(section_);
    if (s == km_.end()) return fallback;
    auto it = s->second.find(key);
    return it == s->second.end() ? fallback : it->second;
  }
  double require(const std::string& key) const {
    auto s = km_.find(section_);
    if (s != km_.end()) {
      auto it = s->second.find(key);
      if (it != s->second.end()) return it->second;
    }
    throw std::runtime_error("config: missing [" + section_ + "] " + key);
  }

 private:
  const KeyMap& km_;
  std::string section_;
};

ClockConfig read_clock(const KeyMap& km, const std::string& section) {
  Fields f(km, section);
  ClockConfig c;
  c.t_min = f.require("T_min");
  c.t_avg = f.require("T_avg");
  c.t_max = f.require("T_max");
  c.jitter = f.get("jitter", 0.0) != 0.0;
  c.seed = static_cast<std::uint64_t>(f.get("seed", 0.0));
  return c;
}

}  // namespace

LoadedScenario parse_scenario(const std::string& text) {
  const KeyMap km = parse_sections(text);
  LoadedScenario out;
  Scenario& sc = out.scenario;

  Fields plant(km, "plant");
  sc.plant.m = plant.get("m", sc.plant.m);
  sc.plant.L = plant.get("L", sc.plant.L);
  sc.plant.g_c = plant.get("g_c", sc.plant.g_c);
  sc.plant.U = plant.get("U", sc.plant.U);
  sc.plant.theta_max = plant.get("theta_max", sc.plant.theta_max);
  sc.plant.omega_max = plant.get("omega_max", sc.plant.omega_max);

  Fields fbl(km, "fbl");
  sc.gains.K1 = fbl.get("K1", sc.gains.K1);
  sc.gains.K2 = fbl.get("K2", sc.gains.K2);

  Fields mpc(km, "mpc");
  sc.mpc.T = mpc.get("T", sc.mpc.T);
  sc.mpc.N = static_cast<int>(mpc.get("N", sc.mpc.N));
  sc.mpc.Q(0) = mpc.get("Q1", sc.mpc.Q(0));
  sc.mpc.Q(1) = mpc.get("Q2", sc.mpc.Q(1));
  sc.mpc.R = mpc.get("R", sc.mpc.R);
  sc.mpc.initial_set_radius(0) =
      mpc.get("initial_set_radius_1", sc.mpc.initial_set_radius(0));
  sc.mpc.initial_set_radius(1) =
      mpc.get("initial_set_radius_2", sc.mpc.initial_set_radius(1));
  sc.mpc.eps_qp = mpc.get("eps_qp", sc.mpc.eps_qp);
  sc.mpc.max_iter = static_cast<int>(mpc.get("max_iter", sc.mpc.max_iter));
  sc.mpc.state_margin = mpc.get("state_margin", sc.mpc.state_margin);
  sc.cost_radii(0) = mpc.get("E_radius_1", sc.cost_radii(0));
  sc.cost_radii(1) = mpc.get("E_radius_2", sc.cost_radii(1));
  sc.cost_quantum = mpc.get("q_quantum", sc.cost_quantum);

  sc.clock_m = read_clock(km, "clock.m");
  sc.clock_l = read_clock(km, "clock.l");

  Fields net(km, "network");
  sc.network.m_to_l_min = net.get("delay_m_to_l", 0.0);
  sc.network.m_to_l_max = net.get("delay_m_to_l_max", sc.network.m_to_l_min);
  sc.network.l_to_m_min = net.get("delay_l_to_m", 0.0);
  sc.network.l_to_m_max = net.get("delay_l_to_m_max", sc.network.l_to_m_min);
  sc.network.seed = static_cast<std::uint64_t>(net.get("seed", 0.0));

  Fields run(km, "run");
  sc.h = run.get("h", sc.h);
  sc.duration = run.get("duration", sc.duration);
  sc.x_i(0) = run.get("x_i_1", sc.x_i(0));
  sc.x_i(1) = run.get("x_i_2", sc.x_i(1));
  sc.init_perturbation = run.get("init_perturbation", sc.init_perturbation);
  sc.sensor_noise = run.get("sensor_noise", sc.sensor_noise);
  sc.seed_init = static_cast<std::uint64_t>(run.get("seed_init", 1.0));
  sc.seed_est = static_cast<std::uint64_t>(run.get("seed_est", 2.0));

  ParameterSet& p = out.params;
  Fields pf(km, "params");
  p.T_min_m = sc.clock_m.t_min;
  p.T_avg_m = sc.clock_m.t_avg;
  p.T_max_m = sc.clock_m.t_max;
  p.T_min_l = sc.clock_l.t_min;
  p.T_avg_l = sc.clock_l.t_avg;
  p.T_max_l = sc.clock_l.t_max;
  p.T_fresh_m = pf.require("T_fresh_m");
  p.T_fresh_l = pf.require("T_fresh_l");
  p.delta_A_init_MPC = pf.require("delta_A_init_MPC");
  p.delta_G_init_MPC = pf.require("delta_G_init_MPC");
  p.delta_sensor_MPC = pf.require("delta_sensor_MPC");
  p.delta_sensor_Est = pf.require("delta_sensor_Est");
  p.delta_dynamics_MPC = pf.require("delta_dynamics_MPC");
  p.delta_dynamics_FL = pf.require("delta_dynamics_FL");
  p.delta_tracking_FL = pf.require("delta_tracking_FL");
  p.delta_progress_MPC = pf.require("delta_progress_MPC");
  p.M = pf.require("M");
  p.lambda = pf.require("lambda");
  p.E_radius_min = std::min(sc.cost_radii(0), sc.cost_radii(1));
  derive_plant_constants(p, sc.plant, sc.gains,
                         planning_input_bound(sc.plant));
  return out;
}

LoadedScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

struct ParamField {
  const char* name;
  double ParameterSet::*member;
};

constexpr ParamField kParamFields[] = {
    {"T_min_m", &ParameterSet::T_min_m},
    {"T_avg_m", &ParameterSet::T_avg_m},
    {"T_max_m", &ParameterSet::T_max_m},
    {"T_fresh_m", &ParameterSet::T_fresh_m},
    {"T_min_l", &ParameterSet::T_min_l},
    {"T_avg_l", &ParameterSet::T_avg_l},
    {"T_max_l", &ParameterSet::T_max_l},
    {"T_fresh_l", &ParameterSet::T_fresh_l},
    {"delta_A_init_MPC", &ParameterSet::delta_A_init_MPC},
    {"delta_G_init_MPC", &ParameterSet::delta_G_init_MPC},
    {"delta_sensor_MPC", &ParameterSet::delta_sensor_MPC},
    {"delta_sensor_Est", &ParameterSet::delta_sensor_Est},
    {"delta_dynamics_MPC", &ParameterSet::delta_dynamics_MPC},
    {"delta_dynamics_FL", &ParameterSet::delta_dynamics_FL},
    {"delta_tracking_FL", &ParameterSet::delta_tracking_FL},
    {"delta_progress_MPC", &ParameterSet::delta_progress_MPC},
    {"D_x", &ParameterSet::D_x},
    {"D_d", &ParameterSet::D_d},
    {"M", &ParameterSet::M},
    {"lambda", &ParameterSet::lambda},
    {"U", &ParameterSet::U},
    {"G", &ParameterSet::G},
    {"L_f", &ParameterSet::L_f},
    {"L_g", &ParameterSet::L_g},
    {"A_cl_norm", &ParameterSet::A_cl_norm},
    {"delta_w", &ParameterSet::delta_w},
    {"E_radius_min", &ParameterSet::E_radius_min},
};

}  // namespace

ParameterSet parse_params(const std::string& text) {
  const KeyMap km = parse_sections(text);
  // Accept both a bare file and a [params] section.
  const auto* fields = km.count("params") ? &km.at("params") : nullptr;
  const auto* bare = km.count("") ? &km.at("") : nullptr;
  ParameterSet p;
  for (const auto& f : kParamFields) {
    bool found = false;
    for (const auto* src : {fields, bare}) {
      if (!src) continue;
      auto it = src->find(f.name);
      if (it != src->end()) {
        p.*(f.member) = it->second;
        found = true;
      }
    }
    if (!found)
      throw MissingParameter(std::string("params: missing ") + f.name);
  }
  return p;
}

ParameterSet load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_params(ss.str());
}

std::string print_params(const ParameterSet& p) {
  std::string out;
  for (const auto& f : kParamFields)
    out += std::string(f.name) + " = " + format_double(p.*(f.member)) + "\n";
  return out;
}

CostFunction make_cost_function(const Scenario& sc) {
  Eigen::Matrix2d A_d;
  Eigen::Vector2d B_d;
  discretize_upright(sc.plant, sc.mpc.dt(), A_d, B_d);
  const Eigen::Matrix2d P =
      dare(A_d, B_d, Eigen::Matrix2d(sc.mpc.Q.asDiagonal()), sc.mpc.R);
  return CostFunction(P, Eigen::Vector2d::Zero(), sc.cost_radii,
                      sc.cost_quantum);
}

PredicateRegistry make_registry(const Scenario& sc) {
  return make_standard_registry(sc.plant, make_cost_function(sc));
}

}  // namespace mcl
