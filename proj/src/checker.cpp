#include "slin/checker.hpp"

#include <algorithm>
#include <unordered_set>

namespace slin {
namespace {

enum class Closing { Returned, Aborted, Pending };

struct OpInfo {
  OpId id = 0;
  ThreadId thread = 0;
  std::string method;
  std::size_t method_index = 0;
  Value arg;
  Closing closing = Closing::Pending;
  Value ret;
  std::uint64_t preds = 0;
};

struct MemoKey {
  std::uint64_t mask;
  State state;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t seed = std::hash<std::uint64_t>{}(k.mask);
    hash_combine(seed, hash_value(k.state));
    return seed;
  }
};

std::vector<OpInfo> collect_ops(const History& h, const SeqSpec& spec) {
  auto ids = h.operations();
  if (ids.size() > 64) throw UsageError("linearization search supports at most 64 operations");
  std::sort(ids.begin(), ids.end());
  std::vector<OpInfo> ops;
  ops.reserve(ids.size());
  for (OpId id : ids) {
    const auto& inv = h.invocation_of(id);
    const auto& call = std::get<Invoke>(inv.label);
    OpInfo op{id, inv.thread, call.method, spec.method_index(call.method), call.arg, Closing::Pending, {}, 0};
    if (const Event* r = h.response_of(id)) {
      if (const auto* ret = std::get_if<Return>(&r->label)) {
        op.closing = Closing::Returned;
        op.ret = ret->value;
      } else {
        op.closing = Closing::Aborted;
      }
    }
    ops.push_back(std::move(op));
  }
  const OpOrder order = happened_before(h);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = 0; j < ops.size(); ++j) {
      if (order.precedes(ops[j].id, ops[i].id)) ops[i].preds |= std::uint64_t{1} << j;
    }
  }
  return ops;
}

struct Search {
  const SeqSpec& spec;
  const std::vector<OpInfo>& ops;
  std::uint64_t required_mask = 0;
  std::optional<State> required_final;
  std::unordered_set<MemoKey, MemoKeyHash> failed;
  std::vector<std::pair<std::size_t, Outcome>> path;

  bool accepts(std::uint64_t mask, const State& s) const {
    if ((mask & required_mask) != required_mask) return false;
    return !required_final || spec.domain().canonical(s) == *required_final;
  }

  static bool matches(const OpInfo& op, const Outcome& o) {
    switch (op.closing) {
      case Closing::Returned: return !o.aborted && o.ret == op.ret;
      case Closing::Aborted: return o.aborted;
      case Closing::Pending: return !o.aborted;
    }
    return false;
  }

  bool dfs(std::uint64_t mask, const State& s) {
    if (accepts(mask, s)) return true;
    MemoKey key{mask, s};
    if (failed.contains(key)) return false;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if ((mask & bit) || (ops[i].preds & ~mask)) continue;
      for (auto& o : spec.apply(ops[i].method_index, s, ops[i].arg)) {
        if (!matches(ops[i], o)) continue;
        path.emplace_back(i, o);
        if (dfs(mask | bit, o.state)) return true;
        path.pop_back();
      }
    }
    failed.insert(std::move(key));
    return false;
  }
};

Event response_event(const OpInfo& op, const Outcome& o) {
  return o.aborted ? make_abort(op.thread, op.id) : make_return(op.thread, op.id, o.ret);
}

Linearization assemble(const History& h, const SeqSpec& spec, const State& start,
                       const std::vector<OpInfo>& ops,
                       const std::vector<std::pair<std::size_t, Outcome>>& path) {
  std::vector<Event> witness;
  std::set<OpId> kept;
  for (const auto& [i, o] : path) {
    witness.push_back(make_invoke(ops[i].thread, ops[i].id, ops[i].method, ops[i].arg));
    witness.push_back(response_event(ops[i], o));
    kept.insert(ops[i].id);
  }
  std::vector<Event> completion;
  for (const auto& e : h.events()) {
    if (kept.contains(*e.op)) completion.push_back(e);
  }
  for (const auto& [i, o] : path) {
    if (ops[i].closing == Closing::Pending) completion.push_back(response_event(ops[i], o));
  }
  Linearization lin{History(std::move(completion)), History(std::move(witness)), {}};
  lin.finals = legal_seq_outcomes(spec, start, lin.witness);
  return lin;
}

ExecutionVerdict fail(std::size_t index, std::string note,
                      std::optional<Linearization> witness = std::nullopt) {
  return ExecutionVerdict{index, false, std::move(witness), std::move(note)};
}

void tally(CheckReport& report, ExecutionVerdict v) {
  if (!v.passed) report.passed = false;
  report.executions.push_back(std::move(v));
}

}  // namespace

std::optional<Linearization> find_linearization(const History& h, const SeqSpec& spec,
                                                const State& start,
                                                const std::optional<State>& required_final) {
  if (!is_well_formed(h)) throw UsageError("history is not well-formed");
  const auto ops = collect_ops(h, spec);
  Search search{spec, ops, 0, std::nullopt, {}, {}};
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].closing != Closing::Pending) search.required_mask |= std::uint64_t{1} << i;
  }
  if (required_final) search.required_final = spec.domain().canonical(*required_final);
  if (!search.dfs(0, start)) return std::nullopt;
  return assemble(h, spec, start, ops, search.path);
}

std::optional<Linearization> find_linearization(const RecordedExecution& exec, const SeqSpec& spec) {
  return find_linearization(exec.history, spec, exec.initial);
}

std::optional<Linearization> find_strict_linearization(const RecordedExecution& exec,
                                                       const SeqSpec& spec) {
  if (exec.status != ExecStatus::Terminated || !exec.final_state) {
    throw UsageError("strict linearization needs a terminated execution with a final state");
  }
  return find_linearization(exec.history, spec, exec.initial, exec.final_state);
}

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(executions.begin(), executions.end(), [](const auto& v) { return !v.passed; }));
}

const ExecutionVerdict* CheckReport::first_failure() const {
  for (const auto& v : executions) {
    if (!v.passed) return &v;
  }
  return nullptr;
}

CheckReport check_strict(std::span<const RecordedExecution> execs, const SeqSpec& spec) {
  CheckReport report{"strict", spec.name(), true, {}, std::nullopt};
  for (std::size_t i = 0; i < execs.size(); ++i) {
    const auto& exec = execs[i];
    auto plain = find_linearization(exec, spec);
    if (!plain) {
      tally(report, fail(i, "no linearization"));
      continue;
    }
    if (exec.status != ExecStatus::Terminated) {
      tally(report, ExecutionVerdict{i, true, std::move(plain), {}});
      continue;
    }
    if (auto strict = find_strict_linearization(exec, spec)) {
      tally(report, ExecutionVerdict{i, true, std::move(strict), {}});
    } else {
      tally(report, fail(i, "no linearization reaches the recorded final state", std::move(plain)));
    }
  }
  return report;
}

namespace {

ExecutionVerdict general_verdict(std::size_t i, const RecordedExecution& exec, const SeqSpec& adt,
                                 const AbstractionFunction& af, const RenamingFunction& rf,
                                 bool require_final) {
  State start;
  std::optional<State> final_image;
  try {
    start = af(exec.initial);
    if (require_final && exec.status == ExecStatus::Terminated && exec.final_state) {
      final_image = af(*exec.final_state);
    }
  } catch (const DomainError& e) {
    return fail(i, std::string("abstraction undefined: ") + e.what());
  }
  const History renamed = rename_history(exec.history, rf);
  auto lin = find_linearization(renamed, adt, start);
  if (!lin) return fail(i, "no linearization");
  if (!final_image) return ExecutionVerdict{i, true, std::move(lin), {}};
  if (auto strict = find_linearization(renamed, adt, start, final_image)) {
    return ExecutionVerdict{i, true, std::move(strict), {}};
  }
  return fail(i, "no abstract linearization ends in AF(final state) " + adt.domain().render(*final_image),
              std::move(lin));
}

}  // namespace

CheckReport check_general(std::span<const RecordedExecution> execs, const SeqSpec& adt,
                          const AbstractionFunction& af, const RenamingFunction& rf) {
  CheckReport report{"general", adt.name(), true, {}, std::nullopt};
  for (std::size_t i = 0; i < execs.size(); ++i) {
    tally(report, general_verdict(i, execs[i], adt, af, rf, false));
  }
  return report;
}

CheckReport check_concurrent_implementation(std::span<const RecordedExecution> execs,
                                            const SeqSpec& model_spec, const SeqSpec& adt,
                                            const AbstractionFunction& af,
                                            const RenamingFunction& rf,
                                            std::span<const State> states,
                                            std::span<const Value> alphabet) {
  CheckReport report{"impl", adt.name(), true, {}, std::nullopt};
  report.refinement = is_sequential_implementation(model_spec, adt, af, rf, states, alphabet);
  if (!report.refinement->passed) report.passed = false;
  for (std::size_t i = 0; i < execs.size(); ++i) {
    tally(report, general_verdict(i, execs[i], adt, af, rf, true));
  }
  return report;
}

}  // namespace slin
