#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "slin/explorer.hpp"
#include "slin/history_io.hpp"
#include "slin/registry.hpp"
#include "slin/report.hpp"
#include "slin/reproduce.hpp"

using namespace slin;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string model;
  std::string spec;
  std::string adt;
  std::string af;
  std::string mode;
  std::size_t bound = 200000;
  std::string program;
  std::string file;
  std::string json;
  std::string init;
  std::string name;
  bool verbose = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

ExploreOptions explore_options(const Options& o) {
  ExploreOptions e;
  e.bound = o.bound;
  return e;
}

std::optional<State> initial_state(const Options& o, const StateDomain& d) {
  if (o.init.empty()) return std::nullopt;
  return d.parse(o.init);
}

// The object's own specification: from --model, or --spec.
std::shared_ptr<const SeqSpec> object_spec(const Options& o) {
  if (!o.model.empty()) return make_model(o.model)->sequential_spec_ptr();
  if (!o.spec.empty()) return make_spec(o.spec);
  return nullptr;
}

// Symbols mentioned by a history, or {a, b} when there are none.
std::vector<Value> alphabet_of(const History& h) {
  std::set<Value> symbols;
  for (const auto& e : h.events()) {
    if (const auto* inv = std::get_if<Invoke>(&e.label); inv && inv->arg.is_symbol()) symbols.insert(inv->arg);
    if (const auto* ret = std::get_if<Return>(&e.label); ret && ret->value.is_symbol()) symbols.insert(ret->value);
  }
  if (symbols.empty()) return {Value::symbol("a"), Value::symbol("b")};
  return {symbols.begin(), symbols.end()};
}

struct CheckSetup {
  std::shared_ptr<const SeqSpec> object;
  std::shared_ptr<const SeqSpec> adt;
  AbstractionFunction af;
  RenamingFunction rf;
};

CheckSetup check_setup(const Options& o) {
  CheckSetup s;
  s.object = object_spec(o);
  if (o.mode == "strict") {
    if (!s.object) throw UsageError("--mode strict needs --spec or --model");
    return s;
  }
  s.adt = !o.adt.empty() ? make_spec(o.adt) : nullptr;
  if (!s.adt) {
    if (o.mode == "impl") throw UsageError("--mode impl needs --adt");
    if (!s.object) throw UsageError("--mode general needs --adt or --spec");
    s.adt = s.object;
  }
  if (o.mode == "impl" && !s.object) throw UsageError("--mode impl needs --spec or --model");
  const SeqSpec& obj = s.object ? *s.object : *s.adt;
  s.af = !o.af.empty() ? make_af(o.af) : default_af(obj, *s.adt);
  s.rf = default_renaming(obj, *s.adt);
  return s;
}

CheckReport run_check(const Options& o, const CheckSetup& s, std::span<const RecordedExecution> execs,
                      std::span<const Value> alphabet) {
  if (o.mode == "strict") return check_strict(execs, *s.object);
  if (o.mode == "general") return check_general(execs, *s.adt, s.af, s.rf);
  const auto states = s.object->domain().enumerate(alphabet);
  return check_concurrent_implementation(execs, *s.object, *s.adt, s.af, s.rf, states, alphabet);
}

const StateDomain& report_domain(const CheckSetup& s) { return s.object ? s.object->domain() : s.adt->domain(); }
const StateDomain& witness_domain(const Options& o, const CheckSetup& s) {
  return o.mode == "strict" ? s.object->domain() : s.adt->domain();
}

int cmd_list() {
  for (const auto& r : reproductions()) std::cout << r.name << "  " << r.summary << "\n";
  return kPass;
}

int cmd_reproduce(const Options& o) {
  const auto r = reproduce(o.name, explore_options(o));
  std::cout << r.name << "\n";
  for (const auto& line : r.lines) std::cout << line << "\n";
  std::cout << "verdict: " << (r.passed ? "PASS" : "FAIL") << "\n";
  if (!o.json.empty()) write_json(o.json, {{"name", r.name}, {"verdict", r.passed ? "pass" : "fail"}, {"lines", r.lines}});
  return r.passed ? kPass : kFail;
}

int cmd_check_history(Options o) {
  if (o.mode.empty()) o.mode = "strict";
  const auto file = parse_history_file(slurp(o.file));
  const auto setup = check_setup(o);
  const SeqSpec& start_spec = setup.object ? *setup.object : *setup.adt;
  std::string init = o.init;
  if (init.empty() && file.directives.contains("init")) init = file.directives.at("init");
  RecordedExecution exec{init.empty() ? start_spec.initial_state() : start_spec.domain().parse(init), file.history,
                         ExecStatus::Incomplete, std::nullopt};
  exec.initial = start_spec.domain().canonical(exec.initial);
  if (file.directives.contains("final")) {
    if (!is_complete(file.history)) throw UsageError("a final state needs a complete history");
    exec.status = ExecStatus::Terminated;
    exec.final_state = start_spec.domain().canonical(start_spec.domain().parse(file.directives.at("final")));
  }
  const RecordedExecution execs[]{exec};
  const auto report = run_check(o, setup, execs, alphabet_of(file.history));
  std::cout << render_text(report, execs, report_domain(setup), witness_domain(o, setup), true);
  if (!o.json.empty()) write_json(o.json, to_json(report, witness_domain(o, setup)));
  return report.passed ? kPass : kFail;
}

Target explore_target(const Options& o) {
  if (!o.model.empty()) return Target::model(make_model(o.model));
  if (!o.spec.empty()) return Target::atomic(make_spec(o.spec));
  throw UsageError("explore needs --model or --spec");
}

int cmd_explore(const Options& o) {
  if (o.program.empty()) throw UsageError("explore needs --program");
  const Program p = parse_program(slurp(o.program));
  const Target target = explore_target(o);
  const auto opts = explore_options(o);
  const auto g = build_graph(p, target, opts, initial_state(o, target.domain()));
  nlohmann::json j{{"target", g.target.name()}, {"configurations", g.nodes.size()}, {"transitions", g.transitions},
                   {"truncated", g.truncated}};
  std::cout << "target: " << g.target.name() << "\n";
  std::cout << "configurations: " << g.nodes.size() << ", transitions: " << g.transitions
            << (g.truncated ? " (bound reached)" : "") << "\n";
  const auto finals = final_states(g);
  std::cout << "final states (" << finals.size() << "):\n";
  auto& jf = j["final_states"] = nlohmann::json::array();
  for (const auto& f : finals) {
    const auto s = render(f, p, g.target.domain());
    std::cout << "  " << s << "\n";
    jf.push_back(s);
  }
  const auto traces = client_traces(g, opts);
  std::cout << "client traces (" << traces.size() << "):\n";
  auto& jt = j["client_traces"] = nlohmann::json::array();
  for (const auto& t : traces) {
    const auto s = to_string(t);
    std::cout << "  " << s << "\n";
    jt.push_back(s);
  }
  const auto div = analyze_divergence(g);
  std::vector<std::string> kinds;
  if (div.object_cycle) kinds.push_back(div.fair_object_cycle ? "object cycle (fair)" : "object cycle");
  if (div.object_deadlock) kinds.push_back("object deadlock");
  if (div.client_cycle) kinds.push_back("client cycle");
  if (div.client_deadlock) kinds.push_back("client deadlock");
  std::string line;
  for (const auto& k : kinds) line += (line.empty() ? "" : ", ") + k;
  std::cout << "divergence: " << (line.empty() ? "none" : line) << "\n";
  j["divergence"] = kinds;

  int status = kPass;
  if (!o.mode.empty()) {
    Options co = o;
    if (co.mode == "strict" && co.spec.empty() && co.model.empty()) throw UsageError("--mode strict needs --model");
    const auto setup = check_setup(co);
    const auto execs = recorded_executions(g, false, opts);
    std::set<Value> symbols;
    for (const auto& e : execs) {
      for (const auto& v : alphabet_of(e.history)) symbols.insert(v);
    }
    const std::vector<Value> alphabet(symbols.begin(), symbols.end());
    const auto report = run_check(co, setup, execs, alphabet);
    std::cout << render_text(report, execs, report_domain(setup), witness_domain(co, setup), o.verbose);
    j["check"] = to_json(report, witness_domain(co, setup));
    status = report.passed ? kPass : kFail;
  }
  if (g.truncated) status = kFail;
  write_json(o.json, j);
  return status;
}

int cmd_compare(const Options& o) {
  if (o.program.empty()) throw UsageError("compare needs --program");
  if (o.model.empty()) throw UsageError("compare needs --model");
  const Program p = parse_program(slurp(o.program));
  const auto model = make_model(o.model);
  const auto spec = o.spec.empty() ? model->sequential_spec_ptr() : make_spec(o.spec);
  const auto opts = explore_options(o);
  const auto init = initial_state(o, model->domain());
  const auto t6 = compare_theorem6(p, model, spec, opts, init);
  const auto t10 = detect_divergence_theorem10(p, model, spec, opts, init);
  std::cout << t6.left_name << " vs " << t6.right_name << "\n";
  std::cout << "client traces: " << (t6.traces.equal ? "equal" : "differ") << "\n";
  for (const auto& s : t6.traces.only_left) std::cout << "  only " << t6.left_name << ": " << s << "\n";
  for (const auto& s : t6.traces.only_right) std::cout << "  only " << t6.right_name << ": " << s << "\n";
  std::cout << "final states: " << (t6.finals.equal ? "equal" : "differ") << "\n";
  for (const auto& s : t6.finals.only_left) std::cout << "  only " << t6.left_name << ": " << s << "\n";
  for (const auto& s : t6.finals.only_right) std::cout << "  only " << t6.right_name << ": " << s << "\n";
  std::cout << "divergence: " << t6.left_name << " " << (t10.left.diverges() ? "yes" : "no") << ", "
            << t6.right_name << " " << (t10.right.diverges() ? "yes" : "no") << "\n";
  if (t6.truncated) std::cout << "bound reached: results are partial\n";
  const bool ok = t6.traces.equal && t6.finals.equal && t10.agree() && !t6.truncated;
  std::cout << "verdict: " << (ok ? "PASS" : "FAIL") << "\n";
  write_json(o.json, {{"left", t6.left_name}, {"right", t6.right_name}, {"traces_equal", t6.traces.equal},
                      {"finals_equal", t6.finals.equal}, {"left_finals", t6.left_finals},
                      {"right_finals", t6.right_finals}, {"left_diverges", t10.left.diverges()},
                      {"right_diverges", t10.right.diverges()}, {"verdict", ok ? "pass" : "fail"}});
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded exploration and linearizability checking for concurrent objects"};
  app.require_subcommand(1);
  Options o;

  app.add_subcommand("list", "List the named reproductions");

  auto* rep = app.add_subcommand("reproduce", "Run one named reproduction");
  rep->add_option("name", o.name, "Reproduction name")->required();
  rep->add_option("--bound", o.bound, "Transition bound")->capture_default_str();
  rep->add_option("--json", o.json, "Write a JSON report");

  auto* check = app.add_subcommand("check-history", "Check a recorded history");
  check->add_option("--file", o.file, "History file")->required();
  check->add_option("--model", o.model, "Object model, e.g. hw-queue,N=4");
  check->add_option("--spec", o.spec, "Sequential specification");
  check->add_option("--adt", o.adt, "Abstract data type");
  check->add_option("--af", o.af, "Abstraction function");
  check->add_option("--mode", o.mode, "strict (default), general or impl")
      ->check(CLI::IsMember({"strict", "general", "impl"}));
  check->add_option("--init", o.init, "Initial object state");
  check->add_option("--json", o.json, "Write a JSON report");

  auto* explore = app.add_subcommand("explore", "Explore every schedule of a client program");
  explore->add_option("--program", o.program, "Program file")->required();
  explore->add_option("--model", o.model, "Object model, e.g. hw-queue,N=4");
  explore->add_option("--spec", o.spec, "Run against the atomic version of a specification");
  explore->add_option("--adt", o.adt, "Abstract data type for --mode general or impl");
  explore->add_option("--af", o.af, "Abstraction function");
  explore->add_option("--mode", o.mode, "Check the recorded executions: strict, general or impl")
      ->check(CLI::IsMember({"strict", "general", "impl"}));
  explore->add_option("--bound", o.bound, "Transition bound")->capture_default_str();
  explore->add_option("--init", o.init, "Initial object state");
  explore->add_option("--json", o.json, "Write a JSON report");
  explore->add_flag("--verbose", o.verbose, "List passing executions too");

  auto* compare = app.add_subcommand("compare", "Compare a program on a model and on an atomic specification");
  compare->add_option("--program", o.program, "Program file")->required();
  compare->add_option("--model", o.model, "Object model")->required();
  compare->add_option("--spec", o.spec, "Specification made atomic (default: the model's own)");
  compare->add_option("--bound", o.bound, "Transition bound")->capture_default_str();
  compare->add_option("--init", o.init, "Initial object state");
  compare->add_option("--json", o.json, "Write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand(rep)) return cmd_reproduce(o);
    if (app.got_subcommand(check)) return cmd_check_history(o);
    if (app.got_subcommand(explore)) return cmd_explore(o);
    return cmd_compare(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
