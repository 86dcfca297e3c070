#include "mcl/contract.hpp"

#include <fstream>
#include <sstream>

#include "mcl/parser.hpp"
#include "mcl/trace_io.hpp"

namespace mcl {

namespace {

Env make_env(const SystemBehavior& b, const Contract& c,
             const MonitorConfig& cfg, FailLog* log) {
  Env env;
  env.behavior = &b;
  env.params = c.params;
  env.predicates = cfg.predicates;
  env.options = cfg.options;
  env.log = log;
  return env;
}

GlobalPtr implication(const Contract& c) {
  return GlobalFormula::binary(GlobalFormula::Kind::Implies, c.assumptions,
                               c.guarantees);
}

}  // namespace

SatisfactionReport satisfies(const std::vector<const SystemBehavior*>& corpus,
                             const Contract& c, const MonitorConfig& cfg) {
  SatisfactionReport report;
  const GlobalPtr impl = implication(c);
  for (const SystemBehavior* b : corpus) {
    FailLog log;
    Env env = make_env(*b, c, cfg, &log);
    bind_check(impl, env);
    BehaviorReport br;
    br.assumptions = eval_global(c.assumptions, env);
    br.guarantees = eval_global(c.guarantees, env);
    br.implication = eval_global(impl, env);
    br.failing_atoms = std::move(log.failures);
    report.aggregate.value =
        b3_and(report.aggregate.value, br.implication.value);
    report.behaviors.push_back(std::move(br));
  }
  return report;
}

Contract compose(const Contract& c, const Contract& c2) {
  using GK = GlobalFormula::Kind;
  Contract out;
  out.name = c.name + "||" + c2.name;
  const GlobalPtr a = c.assumptions, g = c.guarantees;
  const GlobalPtr a2 = c2.assumptions, g2 = c2.guarantees;
  out.assumptions = GlobalFormula::binary(
      GK::Or,
      GlobalFormula::binary(
          GK::Or, GlobalFormula::binary(GK::And, a, a2),
          GlobalFormula::binary(GK::And, a, GlobalFormula::negate(g))),
      GlobalFormula::binary(GK::And, a2, GlobalFormula::negate(g2)));
  out.guarantees =
      GlobalFormula::binary(GK::And, GlobalFormula::binary(GK::Implies, a, g),
                            GlobalFormula::binary(GK::Implies, a2, g2));
  out.params = c.params;
  for (const auto& [k, v] : c2.params) {
    auto it = out.params.find(k);
    if (it != out.params.end() && it->second != v)
      throw BindError("compose: parameter '" + k +
                      "' bound to conflicting values");
    out.params[k] = v;
  }
  return out;
}

RefinementResult refines_on(const Contract& c, const Contract& c2,
                            const std::vector<const SystemBehavior*>& corpus,
                            const MonitorConfig& cfg) {
  const GlobalPtr impl = implication(c);
  const GlobalPtr impl2 = implication(c2);
  Contract merged = c;  // parameter union for evaluating both sides
  for (const auto& [k, v] : c2.params) {
    auto it = merged.params.find(k);
    if (it != merged.params.end() && it->second != v)
      throw BindError("refines_on: parameter '" + k +
                      "' bound to conflicting values");
    merged.params[k] = v;
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    Env env = make_env(*corpus[i], merged, cfg, nullptr);
    bind_check(impl, env);
    bind_check(impl2, env);
    const Verdict va2 = eval_global(c2.assumptions, env);
    const Verdict va = eval_global(c.assumptions, env);
    if (va2.value == Bool3::True && va.value != Bool3::True) {
      return {false, static_cast<int>(i),
              "assumption weakening fails: refined contract must assume no "
              "more than the abstract one"};
    }
    const Verdict vi = eval_global(impl, env);
    const Verdict vi2 = eval_global(impl2, env);
    if (vi.value == Bool3::True && vi2.value != Bool3::True) {
      return {false, static_cast<int>(i),
              "promise strengthening fails: a->g does not entail a2->g2"};
    }
  }
  return {};
}

SoundnessReport check_composition_soundness(
    const Contract& c, const Contract& c2, const Contract& c3,
    const std::vector<const SystemBehavior*>& corpus,
    const MonitorConfig& cfg) {
  SoundnessReport report;
  const Contract comp = compose(c, c2);
  report.refinement_holds = refines_on(comp, c3, corpus, cfg).holds;
  if (!report.refinement_holds) return report;

  const GlobalPtr impl = implication(c);
  const GlobalPtr impl2 = implication(c2);
  const GlobalPtr impl3 = implication(c3);
  Contract merged = comp;
  for (const auto& [k, v] : c3.params) merged.params.emplace(k, v);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    Env env = make_env(*corpus[i], merged, cfg, nullptr);
    const Verdict s1 = eval_global(impl, env);
    const Verdict s2 = eval_global(impl2, env);
    if (s1.value != Bool3::True || s2.value != Bool3::True) continue;
    ++report.checked;
    if (eval_global(impl3, env).value == Bool3::False)
      report.violations.push_back(static_cast<int>(i));
  }
  return report;
}

// ------------------------------------------------------------------- file IO

Contract parse_contract(const std::string& text) {
  Contract c;
  std::istringstream in(text);
  std::string line;
  enum class Section { None, Params, Assume, Guarantee } section = Section::None;
  std::string assume_text, guarantee_text;
  while (std::getline(in, line)) {
    // strip comments
    if (const auto pos = line.find("//"); pos != std::string::npos)
      line = line.substr(0, pos);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "contract") {
      ls >> c.name;
      continue;
    }
    if (head == "params:") { section = Section::Params; continue; }
    if (head == "assume:") { section = Section::Assume; continue; }
    if (head == "guarantee:") { section = Section::Guarantee; continue; }
    switch (section) {
      case Section::Params: {
        double v;
        if (!(ls >> v))
          throw std::runtime_error("contract: bad params line: " + line);
        c.params[head] = v;
        break;
      }
      case Section::Assume: assume_text += line + "\n"; break;
      case Section::Guarantee: guarantee_text += line + "\n"; break;
      case Section::None:
        throw std::runtime_error("contract: text outside any section: " + line);
    }
  }
  if (assume_text.empty() || guarantee_text.empty())
    throw std::runtime_error("contract: assume: and guarantee: blocks required");
  c.assumptions = parse(assume_text);
  c.guarantees = parse(guarantee_text);
  return c;
}

std::string print_contract(const Contract& c) {
  std::string out;
  if (!c.comment.empty()) {
    std::istringstream lines(c.comment);
    std::string line;
    while (std::getline(lines, line)) out += "// " + line + "\n";
  }
  out += "contract " + c.name + "\n";
  out += "params:\n";
  for (const auto& [k, v] : c.params) {
    out += "  " + k + " " + format_double(v) + "\n";
  }
  out += "assume:\n  " + print(c.assumptions) + "\n";
  out += "guarantee:\n  " + print(c.guarantees) + "\n";
  return out;
}

Contract load_contract_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open contract file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_contract(ss.str());
}

void write_contract_file(const Contract& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write contract file: " + path);
  out << print_contract(c);
}

}  // namespace mcl
