#include "slin/model.hpp"

#include <unordered_map>

namespace slin {

std::size_t hash_value(const LocalState& l) {
  std::size_t seed = (std::size_t{l.method} << 8) | l.pc;
  for (const auto& r : l.regs) hash_combine(seed, hash_value(r));
  return seed;
}

namespace {

struct IsoKey {
  State shared;
  LocalState local;
  friend bool operator==(const IsoKey&, const IsoKey&) = default;
};

struct IsoKeyHash {
  std::size_t operator()(const IsoKey& k) const {
    std::size_t seed = hash_value(k.shared);
    hash_combine(seed, hash_value(k.local));
    return seed;
  }
};

enum class Mark : std::uint8_t { OnPath, Done };

struct IsolationSearch {
  const ObjectModel& model;
  const State& initial;
  std::size_t max_steps;
  IsolationResult result;
  std::unordered_map<IsoKey, Mark, IsoKeyHash> marks;

  void visit(const State& shared, const LocalState& local, bool modified) {
    IsoKey key{shared, local};
    if (auto it = marks.find(key); it != marks.end()) {
      if (it->second == Mark::OnPath) {
        result.diverges = true;
        if (modified) result.diverging_run_modifies_state = true;
      }
      return;
    }
    if (++result.steps > max_steps) {
      throw UsageError("isolation run of " + model.name() + " exceeded its step budget");
    }
    marks.emplace(key, Mark::OnPath);
    for (auto& st : model.step(shared, local)) {
      const State& next = st.shared ? *st.shared : shared;
      if (st.abort) {
        result.outcomes.insert(Outcome{model.domain().canonical(shared), Value::unit(), true});
      } else if (st.ret) {
        result.outcomes.insert(Outcome{model.domain().canonical(next), *st.ret, false});
      } else {
        visit(next, st.local, modified || next != initial);
      }
    }
    marks[key] = Mark::Done;
  }
};

}  // namespace

IsolationResult run_in_isolation(const ObjectModel& model, const State& shared,
                                 const LocalState& start, std::size_t max_steps) {
  IsolationSearch search{model, shared, max_steps, {}, {}};
  search.visit(shared, start, false);
  return search.result;
}

IsolationResult run_in_isolation(const ObjectModel& model, const State& shared,
                                 std::size_t method, const Value& arg, std::size_t max_steps) {
  return run_in_isolation(model, shared, model.begin(method, arg), max_steps);
}

std::optional<AgreementMismatch> check_companion_agreement(const ObjectModel& model,
                                                           std::span<const State> states,
                                                           std::span<const Value> alphabet) {
  const auto& spec = model.sequential_spec();
  for (const auto& s : states) {
    for (std::size_t m = 0; m < spec.methods().size(); ++m) {
      for (const auto& in : inputs_for(spec.methods()[m], alphabet)) {
        const auto iso = run_in_isolation(model, s, m, in);
        const auto expected_vec = spec.apply(m, s, in);
        const std::set<Outcome> expected(expected_vec.begin(), expected_vec.end());
        std::string detail;
        if (iso.outcomes != expected) {
          detail = "outcome sets differ";
        } else if (expected.empty() != iso.diverges) {
          detail = expected.empty() ? "specification undefined but isolation run terminates"
                                    : "isolation run can diverge where the specification is defined";
        }
        if (!detail.empty()) return AgreementMismatch{s, spec.methods()[m].name, in, detail};
      }
    }
  }
  return std::nullopt;
}

}  // namespace slin
