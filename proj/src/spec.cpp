#include "slin/spec.hpp"

#include <algorithm>

namespace slin {

std::size_t SeqSpec::method_index(std::string_view method) const {
  for (std::size_t i = 0; i < methods_.size(); ++i) {
    if (methods_[i].name == method) return i;
  }
  throw UsageError("specification " + name_ + " has no method '" + std::string(method) + "'");
}

bool SeqSpec::has_method(std::string_view method) const {
  return std::any_of(methods_.begin(), methods_.end(),
                     [&](const MethodDecl& m) { return m.name == method; });
}

InjectivityReport scan_injectivity(const AbstractionFunction& af, std::span<const State> states) {
  InjectivityReport report;
  for (const auto& s : states) {
    const State image = af(s);
    auto [it, inserted] = report.inverse.emplace(image, s);
    if (!inserted && it->second != s) report.collisions.emplace_back(it->second, s);
  }
  return report;
}

RenamingFunction::RenamingFunction(std::vector<std::pair<std::string, std::string>> pairs) {
  for (auto& [from, to] : pairs) {
    if (!forward_.emplace(from, to).second || !backward_.emplace(to, from).second) {
      throw UsageError("renaming function is not a bijection at '" + from + "' -> '" + to + "'");
    }
  }
}

RenamingFunction RenamingFunction::identity(const std::vector<MethodDecl>& methods) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& m : methods) pairs.emplace_back(m.name, m.name);
  return RenamingFunction(std::move(pairs));
}

const std::string& RenamingFunction::apply(const std::string& object_method) const {
  auto it = forward_.find(object_method);
  if (it == forward_.end()) throw UsageError("renaming function has no entry for " + object_method);
  return it->second;
}

const std::string& RenamingFunction::inverse(const std::string& adt_method) const {
  auto it = backward_.find(adt_method);
  if (it == backward_.end()) throw UsageError("renaming function has no preimage for " + adt_method);
  return it->second;
}

History rename_history(const History& h, const RenamingFunction& rf) {
  std::vector<Event> out = h.events();
  for (auto& e : out) {
    if (auto* inv = std::get_if<Invoke>(&e.label)) inv->method = rf.apply(inv->method);
  }
  return History(std::move(out));
}

std::set<State> legal_seq_outcomes(const SeqSpec& spec, const State& start, const History& h_seq) {
  std::set<State> frontier{start};
  const auto& ev = h_seq.events();
  for (std::size_t i = 0; i < ev.size(); i += 2) {
    if (i + 1 >= ev.size()) return {};  // trailing pending invocation: not complete
    const auto* inv = std::get_if<Invoke>(&ev[i].label);
    if (!inv || ev[i + 1].op != ev[i].op) return {};
    const auto* ret = std::get_if<Return>(&ev[i + 1].label);
    const bool abort = std::holds_alternative<ReturnAbort>(ev[i + 1].label);
    const std::size_t m = spec.method_index(inv->method);
    std::set<State> next;
    for (const auto& s : frontier) {
      for (auto& o : spec.apply(m, s, inv->arg)) {
        if (abort ? o.aborted : (!o.aborted && ret && o.ret == ret->value)) {
          next.insert(std::move(o.state));
        }
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return frontier;
}

std::vector<Value> inputs_for(const MethodDecl& m, std::span<const Value> alphabet) {
  if (!m.takes_input) return {Value::unit()};
  return {alphabet.begin(), alphabet.end()};
}

namespace {

std::vector<Outcome> defined(std::vector<Outcome> outcomes) {
  std::erase_if(outcomes, [](const Outcome& o) { return o.aborted; });
  return outcomes;
}

}  // namespace

RefinementVerdict is_sequential_implementation(const SeqSpec& model_spec, const SeqSpec& adt,
                                               const AbstractionFunction& af,
                                               const RenamingFunction& rf,
                                               std::span<const State> states,
                                               std::span<const Value> alphabet) {
  RefinementVerdict verdict;
  for (const auto& sz : states) {
    ++verdict.states_checked;
    if (!model_spec.domain().is_well_formed(sz)) {
      verdict.passed = false;
      verdict.counterexample = {sz, "", Value::unit(), std::nullopt, "state is not well-formed"};
      return verdict;
    }
    const State sa = af(sz);
    for (std::size_t ai = 0; ai < adt.methods().size(); ++ai) {
      const auto& am = adt.methods()[ai];
      const std::size_t zi = model_spec.method_index(rf.inverse(am.name));
      for (const auto& in : inputs_for(am, alphabet)) {
        const auto abstract = defined(adt.apply(ai, sa, in));
        if (abstract.empty()) continue;
        const auto concrete = defined(model_spec.apply(zi, sz, in));
        if (concrete.empty()) {
          verdict.passed = false;
          verdict.counterexample = {sz, am.name, in, abstract.front(),
                                    "concrete method undefined where the abstract one is defined"};
          return verdict;
        }
        for (const auto& c : concrete) {
          const Outcome mapped{af(c.state), c.ret, false};
          if (std::find(abstract.begin(), abstract.end(), mapped) == abstract.end()) {
            verdict.passed = false;
            verdict.counterexample = {sz, am.name, in, mapped,
                                      "concrete outcome has no abstract counterpart"};
            return verdict;
          }
        }
      }
    }
  }
  return verdict;
}

RefinementVerdict check_domain_lifting(const SeqSpec& model_spec, const SeqSpec& adt,
                                       const AbstractionFunction& af, const RenamingFunction& rf,
                                       std::span<const State> states,
                                       std::span<const Value> alphabet) {
  RefinementVerdict verdict;
  for (const auto& sz : states) {
    ++verdict.states_checked;
    const State sa = af(sz);
    for (std::size_t zi = 0; zi < model_spec.methods().size(); ++zi) {
      const auto& zm = model_spec.methods()[zi];
      const std::size_t ai = adt.method_index(rf.apply(zm.name));
      for (const auto& in : inputs_for(zm, alphabet)) {
        if (defined(model_spec.apply(zi, sz, in)).empty()) continue;
        if (defined(adt.apply(ai, sa, in)).empty()) {
          verdict.passed = false;
          verdict.counterexample = {sz, adt.methods()[ai].name, in, std::nullopt,
                                    "abstract method blocks where the concrete one is defined"};
          return verdict;
        }
      }
    }
  }
  return verdict;
}

std::string describe(const RefinementCounterexample& cx, const SeqSpec& model_spec,
                     const SeqSpec& adt) {
  std::string out = cx.reason + ": state " + model_spec.domain().render(cx.concrete);
  if (!cx.method.empty()) out += ", " + cx.method + "(" + to_string(cx.input) + ")";
  if (cx.abstract_outcome) {
    out += " -> (" + adt.domain().render(cx.abstract_outcome->state) + ", " +
           to_string(cx.abstract_outcome->ret) + ")";
  }
  return out;
}

}  // namespace slin
