#include "slin/explorer.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace slin {

// ---------------------------------------------------------------- target

Target Target::model(std::shared_ptr<const ObjectModel> m) {
  Target t;
  t.spec_ = m->sequential_spec_ptr();
  t.model_ = std::move(m);
  return t;
}

Target Target::atomic(std::shared_ptr<const SeqSpec> s) {
  Target t;
  t.spec_ = std::move(s);
  return t;
}

State Target::initial_state() const { return model_ ? model_->initial_state() : spec_->initial_state(); }

std::string Target::name() const { return model_ ? model_->name() : "Ato(" + spec_->name() + ")"; }

std::size_t hash_value(const Config& c) {
  std::size_t seed = c.aborted ? 1 : 0;
  for (const auto& v : c.vars) hash_combine(seed, hash_value(v));
  hash_combine(seed, hash_value(c.shared));
  for (const auto& t : c.threads) {
    hash_combine(seed, (std::size_t{t.pc} << 8) | static_cast<std::size_t>(t.mode));
    hash_combine(seed, hash_value(t.local));
    hash_combine(seed, hash_value(t.reg));
  }
  return seed;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Terminated: return "terminated";
    case Classification::ClientDivergent: return "client-divergent";
    case Classification::ObjectDivergent: return "object-divergent";
    case Classification::Aborted: return "aborted";
    case Classification::BudgetExhausted: return "budget-exhausted";
  }
  return {};
}

// ---------------------------------------------------------------- graph construction

namespace {

struct ConfigHash {
  std::size_t operator()(const Config& c) const { return hash_value(c); }
};

Event client_event(ThreadId t, std::string text) { return Event{t, std::nullopt, Action{std::move(text)}}; }
Event object_action(ThreadId t, std::string_view text) { return Event{t, OpId{0}, Action{std::string(text)}}; }

std::size_t current_phase(const Program& p, const Config& c) {
  std::size_t phase = p.phases;
  for (std::size_t i = 0; i < c.threads.size(); ++i) {
    const auto& ts = c.threads[i];
    const bool done = ts.pc == p.threads[i].code.size() && ts.mode == ThreadState::Mode::AtInstr;
    if (!done) phase = std::min(phase, p.threads[i].phase);
  }
  return phase;
}

bool thread_done(const Program& p, const Config& c, std::size_t i) {
  return c.threads[i].pc == p.threads[i].code.size() && c.threads[i].mode == ThreadState::Mode::AtInstr;
}

struct Successor {
  Config config;
  std::vector<Event> events;
  bool object = false;
};

class Stepper {
 public:
  Stepper(const Program& p, const Target& t) : p_(p), t_(t) {
    for (const auto& tc : p.threads) {
      for (const auto& in : tc.code) {
        if (in.kind != InstrKind::Call) continue;
        method_index(in.method);
        const auto& decl = t.methods()[method_index(in.method)];
        if (in.expr && !decl.takes_input) {
          throw UsageError("method " + in.method + " of " + t.name() + " takes no argument (line " +
                           std::to_string(in.line) + ")");
        }
      }
    }
  }

  // Successors of thread i, and whether it waits on a call outside the domain.
  std::vector<Successor> successors(const Config& c, std::size_t i, bool& blocked_in_call) const {
    blocked_in_call = false;
    const ThreadId tid = static_cast<ThreadId>(i + 1);
    const auto& ts = c.threads[i];
    const auto& code = p_.threads[i].code;
    switch (ts.mode) {
      case ThreadState::Mode::AtInstr: return client_step(c, i, tid, code[ts.pc]);
      case ThreadState::Mode::ArgReady: {
        const auto& in = code[ts.pc];
        const std::size_t m = method_index(in.method);
        Event inv = make_invoke(tid, 0, in.method, ts.reg);
        if (!t_.is_atomic()) {
          Successor s{c, {inv}, true};
          auto& nt = s.config.threads[i];
          nt.mode = ThreadState::Mode::InCall;
          nt.local = t_.object_model()->begin(m, ts.reg);
          nt.reg = Value{};
          return {std::move(s)};
        }
        std::vector<Successor> out;
        for (const auto& o : t_.spec().apply(m, c.shared, ts.reg)) {
          if (o.aborted) {
            out.push_back(abort_successor({inv, make_abort(tid, 0)}, true));
            continue;
          }
          Successor s{c, {inv, make_return(tid, 0, o.ret)}, true};
          s.config.shared = o.state;
          finish_call(s.config, i, o.ret);
          out.push_back(std::move(s));
        }
        blocked_in_call = out.empty();
        return out;
      }
      case ThreadState::Mode::InCall: {
        std::vector<Successor> out;
        for (const auto& st : t_.object_model()->step(c.shared, ts.local)) {
          std::vector<Event> events;
          if (!st.action.empty()) events.push_back(object_action(tid, st.action));
          if (st.abort) {
            events.push_back(make_abort(tid, 0));
            out.push_back(abort_successor(std::move(events), true));
            continue;
          }
          Successor s{c, {}, true};
          if (st.shared) s.config.shared = *st.shared;
          if (st.ret) {
            events.push_back(make_return(tid, 0, *st.ret));
            s.config.threads[i].local = LocalState{};
            finish_call(s.config, i, *st.ret);
          } else {
            s.config.threads[i].local = st.local;
          }
          s.events = std::move(events);
          out.push_back(std::move(s));
        }
        return out;
      }
      case ThreadState::Mode::HasResult: {
        const auto& in = code[ts.pc];
        Successor s{c, {client_event(tid, p_.var_names[*in.target] + " := " + to_string(ts.reg))}, false};
        s.config.vars[*in.target] = ts.reg;
        advance(s.config.threads[i], in.next);
        return {std::move(s)};
      }
    }
    return {};
  }

  Config abort_config() const {
    Config a;
    a.aborted = true;
    return a;
  }

 private:
  std::size_t method_index(const std::string& name) const {
    const auto& ms = t_.methods();
    for (std::size_t k = 0; k < ms.size(); ++k) {
      if (ms[k].name == name) return k;
    }
    throw UsageError(t_.name() + " has no method '" + name + "'");
  }

  Successor abort_successor(std::vector<Event> events, bool object) const {
    return Successor{abort_config(), std::move(events), object};
  }

  static void advance(ThreadState& ts, std::size_t next) {
    ts.pc = static_cast<std::uint32_t>(next);
    ts.mode = ThreadState::Mode::AtInstr;
    ts.reg = Value{};
  }

  void finish_call(Config& c, std::size_t i, const Value& ret) const {
    auto& ts = c.threads[i];
    const auto& in = p_.threads[i].code[ts.pc];
    if (in.target) {
      ts.mode = ThreadState::Mode::HasResult;
      ts.reg = ret;
    } else {
      advance(ts, in.next);
    }
  }

  std::vector<Successor> client_step(const Config& c, std::size_t i, ThreadId tid, const Instr& in) const {
    const auto& names = p_.var_names;
    try {
      Successor s{c, {}, false};
      auto& ts = s.config.threads[i];
      switch (in.kind) {
        case InstrKind::Skip:
          s.events.push_back(client_event(tid, "skip"));
          advance(ts, in.next);
          break;
        case InstrKind::Assign: {
          const Value v = evaluate(*in.expr, c.vars);
          s.config.vars[*in.target] = v;
          s.events.push_back(client_event(tid, names[*in.target] + " := " + to_string(v)));
          advance(ts, in.next);
          break;
        }
        case InstrKind::Branch: {
          const Value v = evaluate(*in.expr, c.vars);
          if (!v.is_int()) throw EvalError("condition is not a boolean: " + to_string(v));
          const bool taken = v.as_int() != 0;
          s.events.push_back(client_event(tid, describe(p_, in) + (taken ? " : true" : " : false")));
          advance(ts, taken ? in.next : in.next_false);
          break;
        }
        case InstrKind::Read: {
          const auto v = t_.domain().read_cell(c.shared, in.cell);
          if (!v) throw EvalError("object has no readable cell " + in.cell);
          s.config.vars[*in.target] = *v;
          s.events.push_back(client_event(tid, names[*in.target] + " := " + p_.object + "." + in.cell +
                                                   " = " + to_string(*v)));
          advance(ts, in.next);
          break;
        }
        case InstrKind::Write: {
          const Value v = evaluate(*in.expr, c.vars);
          auto next = t_.domain().write_cell(c.shared, in.cell, v);
          if (!next) throw EvalError("object has no writable cell " + in.cell);
          s.config.shared = std::move(*next);
          s.events.push_back(client_event(tid, p_.object + "." + in.cell + " := " + to_string(v)));
          advance(ts, in.next);
          break;
        }
        case InstrKind::Atomic: {
          if (in.expr) {
            const Value g = evaluate(*in.expr, c.vars);
            if (!g.is_int()) throw EvalError("guard is not a boolean: " + to_string(g));
            if (g.as_int() == 0) return {};
          }
          std::vector<Value> values;
          for (const auto& [slot, e] : in.assigns) values.push_back(evaluate(e, c.vars));
          std::string text = "atomic {";
          for (std::size_t k = 0; k < values.size(); ++k) {
            s.config.vars[in.assigns[k].first] = values[k];
            text += (k ? "; " : " ") + names[in.assigns[k].first] + " := " + to_string(values[k]);
          }
          s.events.push_back(client_event(tid, text + " }"));
          advance(ts, in.next);
          break;
        }
        case InstrKind::Call: {
          const Value arg = in.expr ? evaluate(*in.expr, c.vars) : Value::unit();
          s.events.push_back(client_event(tid, "arg " + p_.object + "." + in.method + "(" + (in.expr ? to_string(arg) : std::string()) + ")"));
          ts.mode = ThreadState::Mode::ArgReady;
          ts.reg = arg;
          break;
        }
      }
      return {std::move(s)};
    } catch (const EvalError& e) {
      return {abort_successor({client_event(tid, std::string("error: ") + e.what())}, false)};
    }
  }

  const Program& p_;
  const Target& t_;
};

}  // namespace

StateGraph build_graph(const Program& p, const Target& target, ExploreOptions opts,
                       const std::optional<State>& initial) {
  StateGraph g{p, target, {}, {}, {}, {}, std::nullopt, 0, false};
  const Stepper stepper(g.program, g.target);
  std::unordered_map<Config, std::size_t, ConfigHash> index;

  Config root;
  root.vars = p.var_init;
  root.shared = initial ? *initial : target.initial_state();
  if (!target.domain().is_well_formed(root.shared)) {
    throw UsageError("initial object state is not well-formed: " + target.domain().render(root.shared));
  }
  root.threads.resize(p.threads.size());

  const auto intern = [&](Config c) {
    auto [it, inserted] = index.emplace(c, g.nodes.size());
    if (inserted) {
      if (c.aborted) g.abort_node = g.nodes.size();
      g.nodes.push_back(std::move(c));
      g.kinds.push_back(NodeKind::Unexplored);
      g.edges.emplace_back();
      g.blocked_in_call.push_back(false);
    }
    return it->second;
  };
  intern(std::move(root));

  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    if (g.nodes[n].aborted) {
      g.kinds[n] = NodeKind::Aborted;
      continue;
    }
    if (g.transitions >= opts.bound) {
      g.truncated = true;
      continue;
    }
    const Config c = g.nodes[n];
    const std::size_t phase = current_phase(g.program, c);
    std::vector<Transition> out;
    std::vector<Config> targets;
    bool any_blocked_call = false;
    bool all_done = true;
    for (std::size_t i = 0; i < c.threads.size(); ++i) {
      if (thread_done(g.program, c, i)) continue;
      all_done = false;
      if (g.program.threads[i].phase != phase) continue;
      bool blocked_call = false;
      for (auto& s : stepper.successors(c, i, blocked_call)) {
        out.push_back(Transition{0, static_cast<ThreadId>(i + 1), std::move(s.events), s.object});
        targets.push_back(std::move(s.config));
      }
      any_blocked_call = any_blocked_call || blocked_call;
    }
    if (g.transitions + out.size() > opts.bound) {
      g.truncated = true;
      continue;
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k].target = intern(std::move(targets[k]));
    g.transitions += out.size();
    if (out.empty()) {
      g.kinds[n] = all_done ? NodeKind::Terminated : NodeKind::Deadlock;
      g.blocked_in_call[n] = any_blocked_call;
    } else {
      g.kinds[n] = NodeKind::Running;
    }
    g.edges[n] = std::move(out);
  }
  return g;
}

// ---------------------------------------------------------------- strongly connected components

namespace {

// Iterative Tarjan over the edges accepted by `keep`.
std::vector<std::size_t> scc_ids(const StateGraph& g, const std::function<bool(const Transition&)>& keep) {
  const std::size_t n = g.nodes.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  std::size_t comps = 0;
  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t s = 0; s < n; ++s) {
    if (index[s] != kUnset) continue;
    std::vector<Frame> frames{{s, 0}};
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = true;
    while (!frames.empty()) {
      auto& f = frames.back();
      const auto& es = g.edges[f.node];
      if (f.edge < es.size()) {
        const auto& e = es[f.edge++];
        if (!keep(e)) continue;
        const std::size_t w = e.target;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const std::size_t v = f.node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
    }
  }
  return comp;
}

// Nodes lying on some cycle made of `keep` edges, with the cycle's component id.
struct CycleInfo {
  std::vector<std::size_t> comp;
  std::vector<bool> cyclic;  // per component
};

CycleInfo cycles(const StateGraph& g, const std::function<bool(const Transition&)>& keep) {
  CycleInfo info{scc_ids(g, keep), {}};
  std::size_t comps = 0;
  for (auto c : info.comp) comps = std::max(comps, c + 1);
  std::vector<std::size_t> size(comps, 0);
  for (auto c : info.comp) ++size[c];
  info.cyclic.assign(comps, false);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    for (const auto& e : g.edges[v]) {
      if (keep(e) && info.comp[e.target] == info.comp[v]) info.cyclic[info.comp[v]] = true;
    }
  }
  return info;
}

bool is_client_edge(const Transition& e) { return !e.object; }
bool any_edge(const Transition&) { return true; }

}  // namespace

// ---------------------------------------------------------------- path enumeration

namespace {

enum class Projection { Full, Client, History };

// Hash-consed event sequences: each prefix is a node of a trie.
class PrefixTrie {
 public:
  PrefixTrie() : parent_{0}, event_{0} {}

  std::uint32_t extend(std::uint32_t prefix, const Event& e) {
    auto [eit, new_event] = event_ids_.emplace(e, static_cast<std::uint32_t>(events_.size()));
    if (new_event) events_.push_back(e);
    const std::uint64_t key = (std::uint64_t{prefix} << 32) | eit->second;
    auto [it, inserted] = children_.emplace(key, static_cast<std::uint32_t>(parent_.size()));
    if (inserted) {
      parent_.push_back(prefix);
      event_.push_back(eit->second);
    }
    return it->second;
  }

  std::vector<Event> unfold(std::uint32_t prefix) const {
    std::vector<Event> out;
    for (std::uint32_t p = prefix; p != 0; p = parent_[p]) out.push_back(events_[event_[p]]);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> event_;
  std::vector<Event> events_;
  std::unordered_map<Event, std::uint32_t> event_ids_;
  std::unordered_map<std::uint64_t, std::uint32_t> children_;
};

struct PathEnd {
  std::vector<Event> trace;
  Classification classification;
  std::optional<std::size_t> cycle_start;
  std::size_t node;
};

class PathEnumerator {
 public:
  PathEnumerator(const StateGraph& g, Projection proj, std::size_t budget)
      : g_(g), proj_(proj), budget_(budget), on_stack_(g.nodes.size(), kOff) {}

  std::vector<PathEnd> run() {
    ops_.assign(g_.nodes.empty() ? 0 : g_.nodes[0].threads.size() + 1, 0);
    if (!g_.nodes.empty()) visit(0, 0, 0);
    return std::move(out_);
  }

  bool truncated() const { return truncated_; }

 private:
  static constexpr std::size_t kOff = static_cast<std::size_t>(-1);

  struct Frame {
    std::uint32_t prefix;
    std::size_t length;
    std::size_t object_events;
  };

  bool projected(const Event& e) const {
    switch (proj_) {
      case Projection::Full: return true;
      case Projection::Client: return e.is_client();
      case Projection::History: return e.is_invoke() || e.is_response();
    }
    return false;
  }

  void emit(std::uint32_t prefix, Classification cls, std::optional<std::size_t> cycle_start, std::size_t node) {
    out_.push_back(PathEnd{trie_.unfold(prefix), cls, cycle_start, node});
  }

  bool wanted(Classification cls) const {
    if (proj_ != Projection::Client) return true;
    return cls != Classification::ObjectDivergent;
  }

  void visit(std::size_t node, std::uint32_t prefix, std::size_t object_events) {
    if (++steps_ > budget_) {
      truncated_ = true;
      return;
    }
    if (on_stack_[node] != kOff) {
      const Frame& first = stack_[on_stack_[node]];
      const bool object_in_cycle = object_events != first.object_events;
      const auto cls = object_in_cycle ? Classification::ObjectDivergent : Classification::ClientDivergent;
      if (wanted(cls)) emit(prefix, cls, first.length, node);
      return;
    }
    if (!memo_.emplace((std::uint64_t{prefix} << 32) | node).second) return;
    switch (g_.kinds[node]) {
      case NodeKind::Terminated: emit(prefix, Classification::Terminated, std::nullopt, node); return;
      case NodeKind::Aborted: emit(prefix, Classification::Aborted, std::nullopt, node); return;
      case NodeKind::Unexplored: emit(prefix, Classification::BudgetExhausted, std::nullopt, node); return;
      case NodeKind::Deadlock: {
        const auto cls = g_.blocked_in_call[node] ? Classification::ObjectDivergent
                                                  : Classification::ClientDivergent;
        if (wanted(cls)) emit(prefix, cls, std::nullopt, node);
        return;
      }
      case NodeKind::Running: break;
    }
    on_stack_[node] = stack_.size();
    stack_.push_back(Frame{prefix, length_, object_events});
    for (const auto& e : g_.edges[node]) {
      const auto saved_ops = ops_;
      const auto saved_next = next_op_;
      const auto saved_length = length_;
      std::uint32_t p = prefix;
      for (Event ev : e.events) {
        if (ev.op) {
          if (ev.is_invoke()) ops_[ev.thread] = ++next_op_;
          ev.op = ops_[ev.thread];
        }
        if (!projected(ev)) continue;
        p = trie_.extend(p, ev);
        ++length_;
      }
      visit(e.target, p, object_events + (e.object ? 1 : 0));
      ops_ = saved_ops;
      next_op_ = saved_next;
      length_ = saved_length;
    }
    stack_.pop_back();
    on_stack_[node] = kOff;
  }

  const StateGraph& g_;
  Projection proj_;
  std::size_t budget_;
  std::size_t steps_ = 0;
  bool truncated_ = false;
  PrefixTrie trie_;
  std::vector<std::size_t> on_stack_;
  std::vector<Frame> stack_;
  std::unordered_set<std::uint64_t> memo_;
  std::vector<OpId> ops_;
  OpId next_op_ = 0;
  std::size_t length_ = 0;
  std::vector<PathEnd> out_;
};

}  // namespace

std::vector<ExecutionResult> enumerate_executions(const StateGraph& g, ExploreOptions opts) {
  PathEnumerator en(g, Projection::Full, opts.path_budget);
  std::vector<ExecutionResult> out;
  for (auto& end : en.run()) {
    ExecutionResult r{std::move(end.trace), end.classification, end.cycle_start, std::nullopt};
    if (r.classification == Classification::Terminated) r.final_config = g.nodes[end.node];
    out.push_back(std::move(r));
  }
  if (en.truncated()) out.push_back(ExecutionResult{{}, Classification::BudgetExhausted, std::nullopt, std::nullopt});
  return out;
}

std::set<ClientTrace> client_traces(const StateGraph& g, ExploreOptions opts) {
  PathEnumerator en(g, Projection::Client, opts.path_budget);
  std::set<ClientTrace> out;
  for (auto& end : en.run()) {
    out.insert(ClientTrace{std::move(end.trace), end.classification, end.cycle_start});
  }
  if (en.truncated()) out.insert(ClientTrace{{}, Classification::BudgetExhausted, std::nullopt});
  return out;
}

std::string to_string(const ClientTrace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    if (t.cycle_start && *t.cycle_start == i) out += "( ";
    const auto& e = t.events[i];
    out += "t" + std::to_string(e.thread) + ":" + std::get<Action>(e.label).descriptor;
    if (i + 1 < t.events.size()) out += " ; ";
  }
  if (t.cycle_start) out += " )^w";
  if (t.classification != Classification::Terminated) out += " [" + to_string(t.classification) + "]";
  return out.empty() ? "<empty>" : out;
}

std::set<FinalState> final_states(const StateGraph& g) {
  std::set<FinalState> out;
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    switch (g.kinds[n]) {
      case NodeKind::Terminated:
        out.insert(FinalState{FinalState::Kind::State, g.nodes[n].vars, g.target.domain().canonical(g.nodes[n].shared)});
        break;
      case NodeKind::Aborted: out.insert(FinalState{FinalState::Kind::Abort, {}, {}}); break;
      case NodeKind::Deadlock:
        if (!g.blocked_in_call[n]) out.insert(FinalState{FinalState::Kind::Bottom, {}, {}});
        break;
      default: break;
    }
  }
  const auto info = cycles(g, is_client_edge);
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    if (info.cyclic[info.comp[n]]) {
      out.insert(FinalState{FinalState::Kind::Bottom, {}, {}});
      break;
    }
  }
  return out;
}

std::string render(const FinalState& f, const Program& p, const StateDomain& d) {
  if (f.kind == FinalState::Kind::Abort) return "abort";
  if (f.kind == FinalState::Kind::Bottom) return "bottom";
  std::string out;
  for (std::size_t i = 0; i < f.vars.size(); ++i) out += p.var_names[i] + "=" + to_string(f.vars[i]) + " ";
  if (out.empty()) return d.render(f.shared);
  return out + "| " + d.render(f.shared);
}

std::vector<RecordedExecution> recorded_executions(const StateGraph& g, bool include_divergent,
                                                   ExploreOptions opts) {
  PathEnumerator en(g, Projection::History, opts.path_budget);
  auto ends = en.run();
  if (en.truncated()) throw UsageError("execution enumeration exceeded its budget");
  const auto& d = g.target.domain();
  const State initial = d.canonical(g.nodes[0].shared);
  std::set<std::tuple<History, bool, State>> seen;
  std::vector<RecordedExecution> out;
  for (auto& end : ends) {
    const bool terminated = end.classification == Classification::Terminated;
    if (!terminated && end.classification != Classification::Aborted && !include_divergent) continue;
    History h(std::move(end.trace));
    State fin = terminated ? d.canonical(g.nodes[end.node].shared) : State{};
    if (!seen.emplace(h, terminated, fin).second) continue;
    RecordedExecution r{initial, std::move(h), terminated ? ExecStatus::Terminated : ExecStatus::Incomplete,
                        std::nullopt};
    if (terminated) r.final_state = std::move(fin);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- divergence

namespace {

struct Walk {
  std::vector<const Transition*> edges;
};

// Shortest non-empty walk from `from` over `keep` edges to a node satisfying `goal`.
std::optional<Walk> bfs_path(const StateGraph& g, std::size_t from, const std::function<bool(std::size_t)>& goal,
                             const std::function<bool(const Transition&)>& keep) {
  std::vector<std::pair<std::size_t, const Transition*>> parent(g.nodes.size(), {0, nullptr});
  std::vector<bool> seen(g.nodes.size(), false);
  std::deque<std::size_t> q{from};
  seen[from] = true;
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop_front();
    for (const auto& e : g.edges[v]) {
      if (!keep(e)) continue;
      if (goal(e.target)) {
        Walk w{{&e}};
        for (std::size_t x = v; x != from; x = parent[x].first) w.edges.push_back(parent[x].second);
        std::reverse(w.edges.begin(), w.edges.end());
        return w;
      }
      if (seen[e.target]) continue;
      seen[e.target] = true;
      parent[e.target] = {v, &e};
      q.push_back(e.target);
    }
  }
  return std::nullopt;
}

void append_events(std::vector<Event>& out, const std::vector<const Transition*>& edges, std::vector<OpId>& ops,
                   OpId& next) {
  for (const auto* e : edges) {
    for (Event ev : e->events) {
      if (ev.op) {
        if (ev.is_invoke()) ops[ev.thread] = ++next;
        ev.op = ops[ev.thread];
      }
      out.push_back(std::move(ev));
    }
  }
}

}  // namespace

DivergenceReport analyze_divergence(const StateGraph& g) {
  DivergenceReport r;
  r.truncated = g.truncated;
  const auto all = cycles(g, any_edge);
  const auto client = cycles(g, is_client_edge);
  const std::size_t threads = g.program.threads.size();

  std::optional<std::size_t> witness_node;
  std::optional<std::size_t> witness_comp;
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    if (client.cyclic[client.comp[v]]) {
      r.client_cycle = true;
    }
    if (g.kinds[v] == NodeKind::Deadlock) {
      (g.blocked_in_call[v] ? r.object_deadlock : r.client_deadlock) = true;
    }
  }
  // Object cycles: a component holding an object edge internally.
  const std::size_t comps = all.cyclic.size();
  std::vector<bool> has_object(comps, false);
  std::vector<std::vector<bool>> steps(comps), idle(comps);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const std::size_t c = all.comp[v];
    if (steps[c].empty()) {
      steps[c].assign(threads + 1, false);
      idle[c].assign(threads + 1, false);
    }
    std::vector<bool> enabled(threads + 1, false);
    for (const auto& e : g.edges[v]) {
      enabled[e.thread] = true;
      if (all.comp[e.target] != c) continue;
      steps[c][e.thread] = true;
      if (e.object) has_object[c] = true;
    }
    for (std::size_t t = 1; t <= threads; ++t) {
      if (!enabled[t]) idle[c][t] = true;
    }
  }
  for (std::size_t c = 0; c < comps; ++c) {
    if (!all.cyclic[c] || !has_object[c]) continue;
    r.object_cycle = true;
    bool fair = true;
    for (std::size_t t = 1; t <= threads; ++t) fair = fair && (steps[c][t] || idle[c][t]);
    if (fair && !r.fair_object_cycle) {
      r.fair_object_cycle = true;
      witness_comp = c;
    } else if (!witness_comp) {
      witness_comp = c;
    }
  }

  // Witness lasso: stem to the chosen component, then a cycle inside it.
  const auto in_comp = [&](std::size_t c) { return [&, c](std::size_t v) { return all.comp[v] == c; }; };
  if (witness_comp) {
    for (std::size_t v = 0; v < g.nodes.size() && !witness_node; ++v) {
      if (all.comp[v] == *witness_comp) witness_node = v;
    }
  }
  if (witness_node) {
    const std::size_t c = *witness_comp;
    ExecutionResult lasso;
    lasso.classification = Classification::ObjectDivergent;
    std::vector<OpId> ops(threads + 1, 0);
    OpId next = 0;
    std::size_t entry = 0;
    if (all.comp[0] != c) {
      const auto stem = bfs_path(g, 0, in_comp(c), any_edge);
      if (stem) {
        append_events(lasso.trace, stem->edges, ops, next);
        entry = stem->edges.back()->target;
      }
    }
    const auto keep_inside = [&](const Transition& e) { return all.comp[e.target] == c; };
    const auto loop = bfs_path(g, entry, [&](std::size_t v) { return v == entry; }, keep_inside);
    lasso.cycle_start = lasso.trace.size();
    if (loop) append_events(lasso.trace, loop->edges, ops, next);
    r.witness = std::move(lasso);
  }
  return r;
}

// ---------------------------------------------------------------- replay and comparisons

ExecutionResult replay(const StateGraph& g, const std::vector<ThreadId>& schedule) {
  ExecutionResult r;
  std::vector<OpId> ops(g.program.threads.size() + 1, 0);
  OpId next = 0;
  std::size_t node = 0;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const Transition* pick = nullptr;
    for (const auto& e : g.edges[node]) {
      if (e.thread == schedule[k]) {
        pick = &e;
        break;
      }
    }
    if (!pick) {
      throw UsageError("schedule step " + std::to_string(k + 1) + ": thread " + std::to_string(schedule[k]) +
                       " has no transition");
    }
    append_events(r.trace, {pick}, ops, next);
    node = pick->target;
  }
  switch (g.kinds[node]) {
    case NodeKind::Terminated:
      r.classification = Classification::Terminated;
      r.final_config = g.nodes[node];
      break;
    case NodeKind::Aborted: r.classification = Classification::Aborted; break;
    default: r.classification = Classification::BudgetExhausted; break;  // schedule stopped early
  }
  return r;
}

RecordedExecution to_recorded(const StateGraph& g, const ExecutionResult& r) {
  std::vector<Event> hist;
  for (const auto& e : r.trace) {
    if (e.is_invoke() || e.is_response()) hist.push_back(e);
  }
  const auto& d = g.target.domain();
  RecordedExecution out{d.canonical(g.nodes[0].shared), History(std::move(hist)), ExecStatus::Incomplete, std::nullopt};
  if (r.final_config && is_complete(out.history)) {
    out.status = ExecStatus::Terminated;
    out.final_state = d.canonical(r.final_config->shared);
  }
  return out;
}

namespace {

template <class T, class F>
SetComparison compare_sets(const std::set<T>& a, const std::set<T>& b, F render_one) {
  SetComparison c;
  for (const auto& x : a) {
    if (!b.contains(x)) c.only_left.push_back(render_one(x));
  }
  for (const auto& x : b) {
    if (!a.contains(x)) c.only_right.push_back(render_one(x));
  }
  c.equal = c.only_left.empty() && c.only_right.empty();
  return c;
}

}  // namespace

Theorem6Report compare_theorem6(const Program& p, std::shared_ptr<const ObjectModel> model,
                                std::shared_ptr<const SeqSpec> spec, ExploreOptions opts,
                                const std::optional<State>& initial) {
  const auto left = build_graph(p, Target::model(std::move(model)), opts, initial);
  const auto right = build_graph(p, Target::atomic(std::move(spec)), opts, initial);
  Theorem6Report r;
  r.left_name = left.target.name();
  r.right_name = right.target.name();
  r.truncated = left.truncated || right.truncated;
  const auto lt = client_traces(left, opts);
  const auto rt = client_traces(right, opts);
  r.traces = compare_sets(lt, rt, [](const ClientTrace& t) { return to_string(t); });
  const auto lf = final_states(left);
  const auto rf = final_states(right);
  const auto& d = left.target.domain();
  const auto show = [&](const FinalState& f) { return render(f, p, d); };
  r.finals = compare_sets(lf, rf, show);
  for (const auto& f : lf) r.left_finals.push_back(show(f));
  for (const auto& f : rf) r.right_finals.push_back(show(f));
  return r;
}

Theorem10Report detect_divergence_theorem10(const Program& p, std::shared_ptr<const ObjectModel> model,
                                            std::shared_ptr<const SeqSpec> spec, ExploreOptions opts,
                                            const std::optional<State>& initial) {
  const auto left = build_graph(p, Target::model(std::move(model)), opts, initial);
  const auto right = build_graph(p, Target::atomic(std::move(spec)), opts, initial);
  return Theorem10Report{left.target.name(), right.target.name(), analyze_divergence(left),
                         analyze_divergence(right)};
}

std::vector<PurelyBlockingViolation> purely_blocking_violations(const StateGraph& g) {
  std::vector<PurelyBlockingViolation> out;
  const ObjectModel* m = g.target.object_model();
  if (!m) return out;
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    const auto& c = g.nodes[n];
    if (c.aborted) continue;
    for (std::size_t i = 0; i < c.threads.size(); ++i) {
      if (c.threads[i].mode != ThreadState::Mode::InCall) continue;
      const auto iso = run_in_isolation(*m, c.shared, c.threads[i].local);
      if (iso.diverges && iso.diverging_run_modifies_state) {
        out.push_back({n, static_cast<ThreadId>(i + 1)});
      }
    }
  }
  return out;
}

std::vector<std::size_t> ill_formed_quiescent_states(const StateGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    const auto& c = g.nodes[n];
    if (c.aborted) continue;
    const bool quiescent = std::none_of(c.threads.begin(), c.threads.end(), [](const ThreadState& t) {
      return t.mode == ThreadState::Mode::InCall;
    });
    if (quiescent && !g.target.domain().is_well_formed(c.shared)) out.push_back(n);
  }
  return out;
}

}  // namespace slin
