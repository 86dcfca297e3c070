// mcltk: simulate, monitor, compose, refine, check-params, demo for the
// multiclock contract toolkit.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mcl/analysis.hpp"
#include "mcl/contract.hpp"
#include "mcl/executive.hpp"
#include "mcl/parser.hpp"
#include "mcl/scenario_io.hpp"
#include "mcl/trace_io.hpp"

namespace fs = std::filesystem;
using namespace mcl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;

void write_file(const fs::path& p, const std::string& content) {
  if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply_seed(Scenario& sc, std::uint64_t seed) {
  sc.seed_init = seed + 1;
  sc.seed_est = seed + 2;
  sc.network.seed = seed + 3;
  sc.clock_m.seed = seed + 4;
  sc.clock_l.seed = seed + 5;
}

std::string verdict_line(const char* label, const Verdict& v) {
  std::string s = std::string("  ") + label + ": " + to_string(v.value);
  if (v.witness) s += " (tick " + std::to_string(*v.witness) + ")";
  return s + "\n";
}

std::string monitor_report(const Contract& c, const SatisfactionReport& rep) {
  std::string out = "contract " + c.name + "\n";
  for (std::size_t i = 0; i < rep.behaviors.size(); ++i) {
    const auto& b = rep.behaviors[i];
    out += "behavior " + std::to_string(i) + ":\n";
    out += verdict_line("assumptions", b.assumptions);
    out += verdict_line("guarantees ", b.guarantees);
    out += verdict_line("a -> g     ", b.implication);
    if (b.implication.value == Bool3::False ||
        b.assumptions.value == Bool3::False ||
        b.guarantees.value == Bool3::False) {
      out += "  failing atoms (first " +
             std::to_string(b.failing_atoms.size()) + "):\n";
      for (const auto& f : b.failing_atoms)
        out += "    @" + f.clock + " tick " + std::to_string(f.pos) + ": " +
               f.atom + "\n";
    }
  }
  out += "aggregate: " + std::string(to_string(rep.aggregate.value)) + "\n";
  return out;
}

// Empirical finite-trace reading of "eventually always in the zero-cost
// box": the state enters E and stays there for the rest of the run.
std::pair<bool, std::int64_t> enters_and_remains(const RunResult& r,
                                                 const CostFunction& cost) {
  std::int64_t last_exit = -1;
  for (std::size_t k = 0; k < r.grid_states.size(); ++k)
    if (!cost.in_zero_set(r.grid_states[k]))
      last_exit = static_cast<std::int64_t>(k);
  const std::int64_t witness = last_exit + 1;
  if (witness >= static_cast<std::int64_t>(r.grid_states.size()))
    return {false, -1};
  return {true, witness};
}

int cmd_demo(const std::string& variant, const std::string& share,
             const std::string& outdir, bool quiet) {
  const std::string scn = share + "/scenarios/" +
                          (variant == "delayed" ? "delayed.scn" : "nominal.scn");
  LoadedScenario ls = load_scenario_file(scn);
  const Scenario& sc = ls.scenario;

  const ConstraintReport creport = check_constraints(ls.params);
  const RunResult r = run(sc);
  const CostFunction cost = make_cost_function(sc);
  const PredicateRegistry registry = make_registry(sc);
  MonitorConfig mc;
  mc.predicates = &registry;

  bool any_false = false;
  bool box_respected = true;
  for (const State& x : r.grid_states)
    if (std::abs(x(0)) > sc.plant.theta_max) box_respected = false;
  const auto settle = enters_and_remains(r, cost);

  std::string summary = "demo " + variant + " (" + sc.name + ")\n";
  summary += report_text(creport);

  const char* names[] = {"mpc", "fl", "est", "tmg"};
  for (const char* n : names) {
    const Contract c = load_contract_file(share + "/contracts/" + n + ".mclc");
    const SatisfactionReport rep = satisfies({&r.behavior}, c, mc);
    const auto& b = rep.behaviors[0];
    if (b.assumptions.value == Bool3::False ||
        b.guarantees.value == Bool3::False ||
        b.implication.value == Bool3::False)
      any_false = true;
    write_file(fs::path(outdir) / ("monitor_" + std::string(n) + ".txt"),
               monitor_report(c, rep));
    summary += "contract " + c.name + ": a=" + to_string(b.assumptions.value) +
               " g=" + to_string(b.guarantees.value) +
               " a->g=" + to_string(b.implication.value) + "\n";
  }

  summary += std::string("state box |theta| <= theta_max: ") +
             (box_respected ? "respected" : "VIOLATED") + "\n";
  summary += "eventually-always in E (finite-trace): ";
  summary += settle.first
                 ? "yes, witness grid tick " + std::to_string(settle.second)
                 : "no";
  summary += "\n";
  summary +=
      "saturation events: " + std::to_string(r.stats.saturation_events) +
      ", infeasible solves: " + std::to_string(r.stats.infeasible_solves) +
      "\n";

  write_file(fs::path(outdir) / "trace.mcltrace", encode_trace(r.behavior));
  write_file(fs::path(outdir) / "run.csv", r.csv);
  write_file(fs::path(outdir) / "constraints.txt", report_text(creport));
  write_file(fs::path(outdir) / "constraints.csv", report_csv(creport));
  if (creport.feasible)
    write_contract_file(system_contract_summary(ls.params),
                        (fs::path(outdir) / "system_contract.mclc").string());
  write_file(fs::path(outdir) / "summary.txt", summary);
  if (!quiet) std::cout << summary;

  const bool green =
      creport.feasible && !any_false && box_respected && settle.first;
  return green ? kExitOk : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiclock contract toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path, out_dir = "out", params_path,
              format = "text", share_dir = "share", variant;
  std::vector<std::string> contract_paths;
  std::vector<std::string> trace_paths;
  std::uint64_t seed = 0;
  bool reference = false, quiet = false;

  auto* sim = app.add_subcommand("simulate", "run a scenario, record a trace");
  sim->add_option("--scenario", scenario_path)->required();
  sim->add_option("--out", out_dir);
  auto* seed_opt = sim->add_option("--seed", seed);
  sim->add_flag("--reference", reference,
                "record the continuous-control reference run");

  auto* mon = app.add_subcommand("monitor", "check contracts against a trace");
  mon->add_option("--trace", trace_path)->required();
  mon->add_option("--contract", contract_paths)->required();
  mon->add_option("--scenario", scenario_path,
                  "scenario supplying plant/cost predicate context")
      ->required();
  mon->add_option("--params", params_path,
                  "override contract parameter bindings");
  mon->add_option("--out", out_dir);
  mon->add_option("--format", format);

  auto* comp = app.add_subcommand("compose", "compose two contracts");
  comp->add_option("--contract", contract_paths)->required();
  comp->add_option("--out", out_dir);

  auto* ref =
      app.add_subcommand("refine", "corpus-relative refinement C <= C'");
  ref->add_option("--contract", contract_paths)->required();
  ref->add_option("--trace", trace_paths)->required();
  ref->add_option("--scenario", scenario_path)->required();

  auto* chk = app.add_subcommand("check-params", "closed-form design checks");
  chk->add_option("--params", params_path);
  chk->add_option("--scenario", scenario_path);
  chk->add_option("--out", out_dir);
  chk->add_option("--format", format);

  auto* demo = app.add_subcommand("demo", "bundled nominal/delayed case study");
  demo->add_option("variant", variant)
      ->required()
      ->check(CLI::IsMember({"nominal", "delayed"}));
  demo->add_option("--out", out_dir);
  demo->add_option("--share", share_dir);
  demo->add_flag("--quiet", quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) {
      LoadedScenario ls = load_scenario_file(scenario_path);
      if (seed_opt->count() > 0) apply_seed(ls.scenario, seed);
      const RunResult r =
          reference ? run_reference_continuous(ls.scenario) : run(ls.scenario);
      write_file(fs::path(out_dir) / "trace.mcltrace",
                 encode_trace(r.behavior));
      write_file(fs::path(out_dir) / "run.csv", r.csv);
      std::cout << "trace written to "
                << (fs::path(out_dir) / "trace.mcltrace") << "\n";
      return kExitOk;
    }

    if (*mon) {
      const SystemBehavior beh = decode_trace(slurp(trace_path));
      LoadedScenario ls = load_scenario_file(scenario_path);
      const PredicateRegistry registry = make_registry(ls.scenario);
      MonitorConfig mc;
      mc.predicates = &registry;
      bool all_true = true;
      std::string full;
      for (const auto& path : contract_paths) {
        Contract c = load_contract_file(path);
        if (!params_path.empty()) {
          const ParameterSet p = load_params_file(params_path);
          std::istringstream ps(print_params(p));
          std::string k, eq;
          double v;
          while (ps >> k >> eq >> v)
            if (c.params.count(k)) c.params[k] = v;
        }
        const SatisfactionReport rep = satisfies({&beh}, c, mc);
        all_true = all_true && rep.aggregate.value == Bool3::True;
        full += monitor_report(c, rep) + "\n";
      }
      std::cout << full;
      write_file(fs::path(out_dir) / "monitor.txt", full);
      return all_true ? kExitOk : kExitFalse;
    }

    if (*comp) {
      if (contract_paths.size() != 2) {
        std::cerr << "compose needs exactly two --contract files\n";
        return kExitUsage;
      }
      const Contract a = load_contract_file(contract_paths[0]);
      const Contract b = load_contract_file(contract_paths[1]);
      const Contract c = compose(a, b);
      std::cout << print_contract(c);
      write_file(fs::path(out_dir) / (c.name + ".mclc"), print_contract(c));
      return kExitOk;
    }

    if (*ref) {
      if (contract_paths.size() != 2) {
        std::cerr << "refine needs exactly two --contract files\n";
        return kExitUsage;
      }
      const Contract c = load_contract_file(contract_paths[0]);
      const Contract c2 = load_contract_file(contract_paths[1]);
      LoadedScenario ls = load_scenario_file(scenario_path);
      const PredicateRegistry registry = make_registry(ls.scenario);
      MonitorConfig mc;
      mc.predicates = &registry;
      std::vector<SystemBehavior> corpus;
      for (const auto& t : trace_paths)
        corpus.push_back(decode_trace(slurp(t)));
      std::vector<const SystemBehavior*> ptrs;
      for (const auto& b : corpus) ptrs.push_back(&b);
      const RefinementResult rr = refines_on(c, c2, ptrs, mc);
      if (rr.holds) {
        std::cout << "refinement holds on the corpus\n";
        return kExitOk;
      }
      std::cout << "counterexample: behavior " << rr.counterexample << ": "
                << rr.reason << "\n";
      return kExitFalse;
    }

    if (*chk) {
      ParameterSet p;
      if (!params_path.empty()) {
        p = load_params_file(params_path);
      } else if (!scenario_path.empty()) {
        p = load_scenario_file(scenario_path).params;
      } else {
        std::cerr << "check-params needs --params or --scenario\n";
        return kExitUsage;
      }
      const ConstraintReport rep = check_constraints(p);
      std::cout << (format == "csv" ? report_csv(rep) : report_text(rep));
      write_file(fs::path(out_dir) / "constraints.txt", report_text(rep));
      write_file(fs::path(out_dir) / "constraints.csv", report_csv(rep));
      return rep.feasible ? kExitOk : kExitFalse;
    }

    if (*demo) return cmd_demo(variant, share_dir, out_dir, quiet);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
