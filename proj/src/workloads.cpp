#include "slin/workloads.hpp"

#include <random>

namespace slin {
namespace {

struct CallSpec {
  bool enqueue = false;
  Value value;                  // Enqueue argument, or Dequeue return
  bool pending = false;
};

const Value kA = Value::symbol("a");
const Value kB = Value::symbol("b");

// Every call sequence of length k; the last call may be pending.
std::vector<std::vector<CallSpec>> call_sequences(std::size_t k) {
  static const std::vector<CallSpec> complete{
      {true, kA, false}, {true, kB, false}, {false, kA, false}, {false, kB, false}, {false, Value::empty(), false}};
  static const std::vector<CallSpec> open{{true, kA, true}, {true, kB, true}, {false, Value::unit(), true}};
  std::vector<std::vector<CallSpec>> out{{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<CallSpec>> next;
    for (const auto& seq : out) {
      for (const auto& c : complete) {
        next.push_back(seq);
        next.back().push_back(c);
      }
    }
    out = std::move(next);
  }
  if (k == 0) return out;
  const std::size_t closed = out.size();
  for (std::size_t s = 0; s < closed; s += complete.size()) {
    for (const auto& c : open) {
      auto seq = out[s];
      seq.back() = c;
      out.push_back(std::move(seq));
    }
  }
  return out;
}

// Events of one thread as (call index, is response).
std::vector<std::pair<std::size_t, bool>> thread_steps(const std::vector<CallSpec>& calls) {
  std::vector<std::pair<std::size_t, bool>> steps;
  for (std::size_t i = 0; i < calls.size(); ++i) {
    steps.emplace_back(i, false);
    if (!calls[i].pending) steps.emplace_back(i, true);
  }
  return steps;
}

struct Interleaver {
  const std::vector<CallSpec>* calls[2];
  std::vector<std::pair<std::size_t, bool>> steps[2];
  const std::function<bool(const History&)>& visit;
  std::vector<int> order;

  bool emit() {
    std::vector<Event> events;
    std::vector<OpId> ids[2]{std::vector<OpId>(calls[0]->size()), std::vector<OpId>(calls[1]->size())};
    std::size_t pos[2]{0, 0};
    OpId next = 1;
    for (int t : order) {
      const auto [i, response] = steps[t][pos[t]++];
      const CallSpec& c = (*calls[t])[i];
      const auto thread = static_cast<ThreadId>(t + 1);
      if (!response) {
        ids[t][i] = next++;
        events.push_back(make_invoke(thread, ids[t][i], c.enqueue ? "Enqueue" : "Dequeue",
                                     c.enqueue ? c.value : Value::unit()));
      } else {
        events.push_back(make_return(thread, ids[t][i], c.enqueue ? Value::unit() : c.value));
      }
    }
    return visit(History(std::move(events)));
  }

  bool run(std::size_t left0, std::size_t left1) {
    if (left0 == 0 && left1 == 0) return emit();
    for (int t = 0; t < 2; ++t) {
      if ((t == 0 ? left0 : left1) == 0) continue;
      order.push_back(t);
      const bool go = t == 0 ? run(left0 - 1, left1) : run(left0, left1 - 1);
      order.pop_back();
      if (!go) return false;
    }
    return true;
  }
};

std::string call_text(const std::string& entry, std::size_t thread, std::size_t index) {
  if (entry.starts_with("E:")) return "call Q.Enqueue('" + entry.substr(2) + "')";
  return "r" + std::to_string(thread) + std::to_string(index) + " = Q.Dequeue()";
}

const std::vector<std::string> kCalls{"E:a", "E:b", "D"};

}  // namespace

void for_each_queue_history(std::size_t max_ops, const std::function<bool(const History&)>& visit) {
  for (std::size_t k1 = 0; k1 <= max_ops; ++k1) {
    const auto seqs1 = call_sequences(k1);
    for (std::size_t k2 = 0; k1 + k2 <= max_ops; ++k2) {
      const auto seqs2 = call_sequences(k2);
      for (const auto& s1 : seqs1) {
        for (const auto& s2 : seqs2) {
          Interleaver it{{&s1, &s2}, {thread_steps(s1), thread_steps(s2)}, visit, {}};
          if (!it.run(it.steps[0].size(), it.steps[1].size())) return;
        }
      }
    }
  }
}

CandidateFn queue_candidates() {
  return [](const Event& inv) -> std::vector<Value> {
    if (std::get<Invoke>(inv.label).method == "Enqueue") return {Value::unit()};
    return {kA, kB, Value::empty()};
  };
}

History random_queue_history(std::size_t max_ops, std::uint32_t seed) {
  std::mt19937 rng(seed);
  const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::size_t threads = 2 + pick(3);
  const std::size_t ops = 2 + pick(max_ops - 1);
  std::vector<std::size_t> remaining(threads, 0);
  for (std::size_t i = 0; i < ops; ++i) ++remaining[pick(threads)];
  std::vector<std::optional<OpId>> open(threads);
  std::vector<bool> enqueuing(threads, false);
  std::vector<std::size_t> choices;
  std::vector<Event> events;
  OpId next = 1;
  const Value values[]{kA, kB, Value::empty()};
  while (true) {
    choices.clear();
    for (std::size_t t = 0; t < threads; ++t) {
      if (open[t] || remaining[t] > 0) choices.push_back(t);
    }
    if (choices.empty()) break;
    const std::size_t t = choices[pick(choices.size())];
    const auto thread = static_cast<ThreadId>(t + 1);
    if (open[t]) {
      // Leave the last call of a thread pending now and then.
      if (remaining[t] == 0 && pick(4) == 0) {
        open[t].reset();
        continue;
      }
      events.push_back(make_return(thread, *open[t], enqueuing[t] ? Value::unit() : values[pick(3)]));
      open[t].reset();
    } else {
      --remaining[t];
      open[t] = next++;
      enqueuing[t] = pick(2) == 0;
      if (enqueuing[t]) {
        events.push_back(make_invoke(thread, *open[t], "Enqueue", pick(2) ? kA : kB));
      } else {
        events.push_back(make_invoke(thread, *open[t], "Dequeue", Value::unit()));
      }
    }
  }
  return History(std::move(events));
}

namespace {

// Applies random adjacent swaps that keep every response-before-invocation pair.
History shuffle_forward(const History& h, std::mt19937& rng) {
  auto events = h.events();
  if (events.size() < 2) return h;
  std::uniform_int_distribution<std::size_t> pos(0, events.size() - 2);
  const std::size_t attempts = events.size() * 2;
  for (std::size_t k = 0; k < attempts; ++k) {
    const std::size_t i = pos(rng);
    const Event& a = events[i];
    const Event& b = events[i + 1];
    if (a.thread == b.thread) continue;
    if (a.is_response() && b.is_invoke()) continue;
    std::swap(events[i], events[i + 1]);
  }
  return History(std::move(events));
}

}  // namespace

std::vector<HistoryTriple> linearizable_triples(std::size_t count, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<HistoryTriple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    History h1 = random_queue_history(6, static_cast<std::uint32_t>(rng()));
    History h2 = shuffle_forward(h1, rng);
    History h3 = shuffle_forward(h2, rng);
    out.push_back({std::move(h1), std::move(h2), std::move(h3)});
  }
  return out;
}

std::string queue_program_text(const std::vector<std::vector<std::string>>& threads) {
  std::string text;
  for (std::size_t t = 0; t < threads.size(); ++t) {
    text += "thread {";
    for (std::size_t i = 0; i < threads[t].size(); ++i) {
      text += (i ? "; " : " ") + call_text(threads[t][i], t + 1, i + 1);
    }
    text += " }\n";
  }
  return text;
}

std::vector<std::vector<std::vector<std::string>>> two_by_two_workloads() {
  std::vector<std::vector<std::string>> per_thread;
  for (const auto& a : kCalls) {
    for (const auto& b : kCalls) per_thread.push_back({a, b});
  }
  const auto enqueues = [](const std::vector<std::string>& calls) {
    std::size_t n = 0;
    for (const auto& c : calls) n += c.starts_with("E:");
    return n;
  };
  std::vector<std::vector<std::vector<std::string>>> out;
  for (const auto& t1 : per_thread) {
    for (const auto& t2 : per_thread) {
      if (enqueues(t1) + enqueues(t2) == 4) continue;
      out.push_back({t1, t2});
    }
  }
  return out;
}

std::vector<std::vector<std::vector<std::string>>> random_workloads(std::size_t count,
                                                                    std::uint32_t seed) {
  std::mt19937 rng(seed);
  const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<std::vector<std::vector<std::string>>> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::vector<std::string>> prog(2 + pick(2));
    for (auto& thread : prog) {
      const std::size_t calls = 1 + pick(2);
      for (std::size_t k = 0; k < calls; ++k) thread.push_back(kCalls[pick(kCalls.size())]);
    }
    out.push_back(std::move(prog));
  }
  return out;
}

}  // namespace slin
