#include "slin/oracle.hpp"

#include <algorithm>
#include <functional>

namespace slin {
namespace {

struct BijectionSearch {
  const std::vector<Event>& a;
  const std::vector<Event>& b;
  std::vector<std::size_t> nu;
  std::vector<bool> used;

  // Constraint between position i and an earlier position k < i: if a[k] is a
  // response and a[i] an invocation, nu(k) < nu(i).
  bool consistent(std::size_t i, std::size_t target) const {
    for (std::size_t k = 0; k < i; ++k) {
      if (a[k].is_response() && a[i].is_invoke() && !(nu[k] < target)) return false;
    }
    return true;
  }

  bool extend(std::size_t i) {
    if (i == a.size()) return true;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || !(a[i] == b[j]) || !consistent(i, j)) continue;
      used[j] = true;
      nu[i] = j;
      if (extend(i + 1)) return true;
      used[j] = false;
    }
    return false;
  }
};

struct SeqCall {
  std::size_t method = 0;
  Value arg;
  std::optional<Value> ret;  // absent for an aborted call
};

// Enumerates every legal sequential order of `calls`, extending a prefix only
// while some run of the spec matches it. Each full order goes to `leaf`.
struct LegalOrders {
  const SeqSpec& spec;
  const std::vector<SeqCall>& calls;
  const std::function<bool(const std::vector<std::size_t>&)>& leaf;
  std::vector<std::size_t> order;
  std::vector<bool> used;

  bool extend(const std::vector<State>& states) {
    if (order.size() == calls.size()) return leaf(order);
    for (std::size_t i = 0; i < calls.size(); ++i) {
      if (used[i]) continue;
      const SeqCall& c = calls[i];
      std::vector<State> next;
      for (const auto& s : states) {
        for (auto& o : spec.apply(c.method, s, c.arg)) {
          if (c.ret ? (!o.aborted && o.ret == *c.ret) : o.aborted) next.push_back(std::move(o.state));
        }
      }
      if (next.empty()) continue;
      used[i] = true;
      order.push_back(i);
      const bool go = extend(next);
      order.pop_back();
      used[i] = false;
      if (!go) return false;
    }
    return true;
  }
};

bool same_projection(const std::vector<Event>& a, const std::vector<Event>& b, ThreadId t) {
  auto i = a.begin();
  auto j = b.begin();
  while (true) {
    while (i != a.end() && i->thread != t) ++i;
    while (j != b.end() && j->thread != t) ++j;
    if (i == a.end() || j == b.end()) return i == a.end() && j == b.end();
    if (!(*i == *j)) return false;
    ++i;
    ++j;
  }
}

bool bijection_exists(const std::vector<Event>& a, const std::vector<Event>& b) {
  if (a.size() != b.size()) return false;
  for (const auto* side : {&a, &b}) {
    for (const auto& e : *side) {
      if (!same_projection(a, b, e.thread)) return false;
    }
  }
  BijectionSearch search{a, b, std::vector<std::size_t>(a.size()), std::vector<bool>(a.size(), false)};
  return search.extend(0);
}

}  // namespace

bool linearizes_by_bijection(const History& h, const History& h_seq) {
  return bijection_exists(h.events(), h_seq.events());
}

std::vector<History> brute_force_linearizations(const History& h) {
  auto ops = h.operations();
  if (ops.size() > 7) throw UsageError("brute-force linearization is limited to 7 operations");
  if (!is_complete(h)) throw UsageError("brute-force linearization needs a complete history");
  std::sort(ops.begin(), ops.end());
  std::vector<History> out;
  do {
    std::vector<Event> seq;
    for (OpId op : ops) {
      seq.push_back(h.invocation_of(op));
      seq.push_back(*h.response_of(op));
    }
    History candidate(std::move(seq));
    if (linearizes_by_bijection(h, candidate)) out.push_back(std::move(candidate));
  } while (std::next_permutation(ops.begin(), ops.end()));
  return out;
}

std::optional<History> brute_force_legal_witness(const History& h, const SeqSpec& spec,
                                                 const State& start, const CandidateFn& candidates) {
  std::optional<History> found;
  for_each_completion(h, candidates, [&](const History& c) {
    auto ops = c.operations();
    if (ops.size() > 7) throw UsageError("brute-force linearization is limited to 7 operations");
    std::sort(ops.begin(), ops.end());
    std::vector<SeqCall> calls;
    for (OpId op : ops) {
      const auto& call = std::get<Invoke>(c.invocation_of(op).label);
      const auto* ret = std::get_if<Return>(&c.response_of(op)->label);
      calls.push_back({spec.method_index(call.method), call.arg,
                       ret ? std::optional<Value>(ret->value) : std::nullopt});
    }
    const std::function<bool(const std::vector<std::size_t>&)> leaf = [&](const auto& order) {
      std::vector<Event> seq;
      seq.reserve(2 * order.size());
      for (std::size_t i : order) {
        seq.push_back(c.invocation_of(ops[i]));
        seq.push_back(*c.response_of(ops[i]));
      }
      if (!bijection_exists(c.events(), seq)) return true;
      found = History(std::move(seq));
      return false;
    };
    LegalOrders orders{spec, calls, leaf, {}, std::vector<bool>(calls.size(), false)};
    if (!orders.extend({start})) return false;
    return true;
  });
  return found;
}

}  // namespace slin
