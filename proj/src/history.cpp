#include "slin/history.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace slin {

std::size_t hash_value(const Event& e) {
  std::size_t seed = e.thread;
  hash_combine(seed, e.op ? std::hash<OpId>{}(*e.op) + 1 : 0);
  hash_combine(seed, e.label.index());
  std::visit(
      [&seed](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Invoke>) {
          hash_combine(seed, std::hash<std::string>{}(l.method));
          hash_combine(seed, hash_value(l.arg));
        } else if constexpr (std::is_same_v<L, Return>) {
          hash_combine(seed, hash_value(l.value));
        } else if constexpr (std::is_same_v<L, Action>) {
          hash_combine(seed, std::hash<std::string>{}(l.descriptor));
        }
      },
      e.label);
  return seed;
}

std::string to_string(const Event& e) {
  std::string out = "t=" + std::to_string(e.thread);
  if (e.op) out += " op=" + std::to_string(*e.op);
  std::visit(
      [&out](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, Invoke>) {
          out += " inv " + l.method + " " + to_string(l.arg);
        } else if constexpr (std::is_same_v<L, Return>) {
          out += " ret " + to_string(l.value);
        } else if constexpr (std::is_same_v<L, ReturnAbort>) {
          out += " abort";
        } else {
          out += " act " + l.descriptor;
        }
      },
      e.label);
  return out;
}

Event make_invoke(ThreadId t, OpId op, std::string method, Value arg) {
  return Event{t, op, Invoke{std::move(method), arg}};
}
Event make_return(ThreadId t, OpId op, Value value) { return Event{t, op, Return{value}}; }
Event make_abort(ThreadId t, OpId op) { return Event{t, op, ReturnAbort{}}; }

History::History(std::vector<Event> events) {
  events_.reserve(events.size());
  for (auto& e : events) push_back(std::move(e));
}

void History::push_back(Event e) {
  if (e.is_action()) throw HistoryError("history events must be invocations or responses");
  if (!e.op) throw HistoryError("history event without operation id");
  const OpId op = *e.op;
  bool seen_inv = false;
  for (const auto& prev : events_) {
    if (prev.op != op) continue;
    if (e.is_invoke()) {
      throw HistoryError("duplicate invocation of operation " + std::to_string(op));
    }
    if (prev.is_response()) {
      throw HistoryError("duplicate response of operation " + std::to_string(op));
    }
    if (prev.thread != e.thread) {
      throw HistoryError("response of operation " + std::to_string(op) + " on a different thread");
    }
    seen_inv = true;
  }
  if (e.is_response() && !seen_inv) {
    throw HistoryError("response of operation " + std::to_string(op) + " without invocation");
  }
  events_.push_back(std::move(e));
}

std::vector<ThreadId> History::threads() const {
  std::vector<ThreadId> out;
  for (const auto& e : events_) out.push_back(e.thread);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<OpId> History::operations() const {
  std::vector<OpId> out;
  for (const auto& e : events_) {
    if (e.is_invoke()) out.push_back(*e.op);
  }
  return out;
}

const Event& History::invocation_of(OpId op) const {
  for (const auto& e : events_) {
    if (e.op == op && e.is_invoke()) return e;
  }
  throw UsageError("no invocation for operation " + std::to_string(op));
}

const Event* History::response_of(OpId op) const {
  for (const auto& e : events_) {
    if (e.op == op && e.is_response()) return &e;
  }
  return nullptr;
}

History project_thread(const History& h, ThreadId t) {
  std::vector<Event> out;
  for (const auto& e : h.events()) {
    if (e.thread == t) out.push_back(e);
  }
  return History(std::move(out));
}

bool is_sequential(const History& h) {
  const auto& ev = h.events();
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (i % 2 == 0) {
      if (!ev[i].is_invoke()) return false;
    } else if (!ev[i].is_response() || ev[i].op != ev[i - 1].op) {
      return false;
    }
  }
  return true;
}

bool is_well_formed(const History& h) {
  // Per-thread state: the pending operation, if any.
  std::map<ThreadId, std::optional<OpId>> open;
  for (const auto& e : h.events()) {
    auto& slot = open[e.thread];
    if (e.is_invoke()) {
      if (slot) return false;
      slot = e.op;
    } else {
      if (slot != e.op) return false;
      slot.reset();
    }
  }
  return true;
}

bool is_complete(const History& h) { return is_well_formed(h) && pending(h).empty(); }

std::set<OpId> pending(const History& h) {
  std::set<OpId> out;
  for (const auto& e : h.events()) {
    if (e.is_invoke()) {
      out.insert(*e.op);
    } else {
      out.erase(*e.op);
    }
  }
  return out;
}

OpOrder::OpOrder(const History& h) : ops_(h.operations()) {
  std::sort(ops_.begin(), ops_.end());
  const std::size_t n = ops_.size();
  matrix_.assign(n * n, false);
  std::vector<std::size_t> responded;
  for (const auto& e : h.events()) {
    const std::size_t idx = index_of(*e.op);
    if (e.is_response()) {
      responded.push_back(idx);
    } else {
      for (std::size_t r : responded) matrix_[r * n + idx] = true;
    }
  }
}

std::size_t OpOrder::index_of(OpId op) const {
  auto it = std::lower_bound(ops_.begin(), ops_.end(), op);
  if (it == ops_.end() || *it != op) throw UsageError("unknown operation " + std::to_string(op));
  return static_cast<std::size_t>(it - ops_.begin());
}

bool OpOrder::precedes(OpId a, OpId b) const {
  return matrix_[index_of(a) * ops_.size() + index_of(b)];
}

std::vector<std::pair<OpId, OpId>> OpOrder::pairs() const {
  std::vector<std::pair<OpId, OpId>> out;
  const std::size_t n = ops_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix_[i * n + j]) out.emplace_back(ops_[i], ops_[j]);
    }
  }
  return out;
}

bool OpOrder::contained_in(const OpOrder& other) const {
  for (auto [a, b] : pairs()) {
    if (!std::binary_search(other.ops_.begin(), other.ops_.end(), a) ||
        !std::binary_search(other.ops_.begin(), other.ops_.end(), b) || !other.precedes(a, b)) {
      return false;
    }
  }
  return true;
}

OpOrder happened_before(const History& h) { return OpOrder(h); }

namespace {

struct CompletionEnumerator {
  const History& base;
  const std::vector<OpId>& pending_ops;
  const CandidateFn& candidates;
  const std::function<bool(const History&)>& visit;
  std::vector<std::vector<Value>> values;  // per pending op

  // Emits base minus dropped invocations, followed by responses for `order`.
  bool emit_with_values(const std::vector<std::size_t>& order, std::vector<Value>& chosen,
                        std::size_t k) {
    if (k == order.size()) {
      std::vector<Event> out;
      for (const auto& e : base.events()) {
        const auto it = std::find(pending_ops.begin(), pending_ops.end(), *e.op);
        if (it != pending_ops.end()) {
          const auto idx = static_cast<std::size_t>(it - pending_ops.begin());
          if (std::find(order.begin(), order.end(), idx) == order.end()) continue;
        }
        out.push_back(e);
      }
      for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& inv = base.invocation_of(pending_ops[order[i]]);
        out.push_back(make_return(inv.thread, *inv.op, chosen[i]));
      }
      return visit(History(std::move(out)));
    }
    for (const auto& v : values[order[k]]) {
      chosen[k] = v;
      if (!emit_with_values(order, chosen, k + 1)) return false;
    }
    return true;
  }

  bool run() {
    const std::size_t n = pending_ops.size();
    for (OpId op : pending_ops) values.push_back(candidates(base.invocation_of(op)));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::uint64_t{1} << i)) order.push_back(i);
      }
      do {
        std::vector<Value> chosen(order.size());
        if (!emit_with_values(order, chosen, 0)) return false;
      } while (std::next_permutation(order.begin(), order.end()));
    }
    return true;
  }
};

}  // namespace

void for_each_completion(const History& h, const CandidateFn& candidates,
                         const std::function<bool(const History&)>& visit) {
  const auto open = pending(h);
  const std::vector<OpId> pending_ops(open.begin(), open.end());
  if (pending_ops.size() > 16) throw UsageError("too many pending operations to complete");
  CompletionEnumerator{h, pending_ops, candidates, visit, {}}.run();
}

std::vector<History> completions(const History& h, const CandidateFn& candidates) {
  std::vector<History> out;
  for_each_completion(h, candidates, [&out](const History& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

bool linearizes(const History& h, const History& h_seq) {
  if (h.size() != h_seq.size()) return false;
  auto threads = h.threads();
  auto other = h_seq.threads();
  if (threads != other) return false;
  for (ThreadId t : threads) {
    if (project_thread(h, t) != project_thread(h_seq, t)) return false;
  }
  return happened_before(h).contained_in(happened_before(h_seq));
}

}  // namespace slin
