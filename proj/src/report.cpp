#include "slin/report.hpp"

#include "slin/history_io.hpp"

namespace slin {
namespace {

std::string indent(const std::string& text, const std::string& pad) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string::npos ? text.size() : nl;
    out += pad + text.substr(pos, end - pos) + "\n";
    pos = end + 1;
  }
  return out;
}

std::string finals_line(const std::set<State>& finals, const StateDomain& d) {
  std::string out;
  for (const auto& s : finals) out += (out.empty() ? "" : " | ") + d.render(s);
  return out.empty() ? "<none>" : out;
}

void describe_execution(std::string& out, const ExecutionVerdict& v, const RecordedExecution* exec,
                        const StateDomain& object_domain, const StateDomain& spec_domain) {
  out += "execution " + std::to_string(v.index) + ": " + (v.passed ? "PASS" : "FAIL");
  if (!v.note.empty()) out += " (" + v.note + ")";
  out += "\n";
  if (exec) {
    out += "  history:\n" + indent(serialize_history(exec->history), "    ");
    if (exec->final_state) out += "  recorded final: " + object_domain.render(*exec->final_state) + "\n";
  }
  if (v.witness) {
    out += "  witness:\n" + indent(serialize_history(v.witness->witness), "    ");
    out += "  legal finals: " + finals_line(v.witness->finals, spec_domain) + "\n";
  }
}

}  // namespace

std::string render_text(const CheckReport& report, std::span<const RecordedExecution> execs,
                        const StateDomain& object_domain, const StateDomain& spec_domain, bool verbose) {
  std::string out = "mode: " + report.mode + "\nspecification: " + report.spec +
                    "\nexecutions: " + std::to_string(report.executions.size()) +
                    "\nfailures: " + std::to_string(report.failures()) + "\n";
  if (report.refinement) {
    const auto& r = *report.refinement;
    out += "sequential implementation: " + std::string(r.passed ? "pass" : "fail") + " over " +
           std::to_string(r.states_checked) + " states\n";
    if (r.counterexample) out += "  counterexample: " + r.counterexample->reason + " at " +
                                 object_domain.render(r.counterexample->concrete) +
                                 (r.counterexample->method.empty() ? "" : ", " + r.counterexample->method) + "\n";
  }
  for (const auto& v : report.executions) {
    if (v.passed && !verbose) continue;
    const RecordedExecution* exec = v.index < execs.size() ? &execs[v.index] : nullptr;
    describe_execution(out, v, exec, object_domain, spec_domain);
  }
  out += std::string("verdict: ") + (report.passed ? "PASS" : "FAIL") + "\n";
  return out;
}

nlohmann::json to_json(const CheckReport& report, const StateDomain& spec_domain) {
  nlohmann::json j;
  j["mode"] = report.mode;
  j["specification"] = report.spec;
  j["verdict"] = report.passed ? "pass" : "fail";
  if (report.refinement) {
    j["sequential_implementation"] = {{"verdict", report.refinement->passed ? "pass" : "fail"},
                                      {"states_checked", report.refinement->states_checked}};
    if (report.refinement->counterexample) {
      j["sequential_implementation"]["counterexample"] = report.refinement->counterexample->reason;
    }
  }
  auto& records = j["executions"] = nlohmann::json::array();
  for (const auto& v : report.executions) {
    nlohmann::json r{{"index", v.index}, {"verdict", v.passed ? "pass" : "fail"}};
    if (!v.note.empty()) r["note"] = v.note;
    if (v.witness) {
      r["completion"] = serialize_history(v.witness->completion);
      r["witness"] = serialize_history(v.witness->witness);
      auto& finals = r["legal_finals"] = nlohmann::json::array();
      for (const auto& s : v.witness->finals) finals.push_back(spec_domain.render(s));
    }
    records.push_back(std::move(r));
  }
  return j;
}

}  // namespace slin
