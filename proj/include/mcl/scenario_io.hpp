#pragma once

#include <string>

#include "mcl/analysis.hpp"
#include "mcl/executive.hpp"
#include "mcl/predicates.hpp"

namespace mcl {

struct LoadedScenario {
  Scenario scenario;
  ParameterSet params;  // declared [params] fields plus derived constants
};

/// Scenario config: sections [plant] [fbl] [mpc] [clock.m] [clock.l]
/// [network] [run] [params], `name = value` lines, `//` comments.
LoadedScenario parse_scenario(const std::string& text);
LoadedScenario load_scenario_file(const std::string& path);

/// Raw complete parameter file (every ParameterSet field explicit).
ParameterSet parse_params(const std::string& text);
ParameterSet load_params_file(const std::string& path);
std::string print_params(const ParameterSet& p);

/// Cost function of the scenario: DARE cost-to-go of the planner's
/// discretization with the configured zero-cost box and quantum.
CostFunction make_cost_function(const Scenario& sc);

PredicateRegistry make_registry(const Scenario& sc);

}  // namespace mcl
