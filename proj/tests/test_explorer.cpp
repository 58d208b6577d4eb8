#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "slin/explorer.hpp"
#include "slin/history_io.hpp"
#include "slin/models.hpp"
#include "slin/reproduce.hpp"
#include "slin/workloads.hpp"

using namespace slin;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const std::string& name) { return slurp(std::string(SLIN_SOURCE_DIR) + "/tests/golden/" + name); }

std::string lines(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += s + "\n";
  return out;
}

// ---------------------------------------------------------------- HW queue oracle

// The array queue written out directly, one atomic line per step.
struct HwThread {
  bool enqueue = false;
  char value = 0;
  int pc = 0;  // enqueue: 0 INC, 1 store, 2 done; dequeue: 0 snapshot, 1 swap, 2 done
  int t = 0;
  int range = 0;
  int i = 0;
  auto operator<=>(const HwThread&) const = default;
};

struct HwConfig {
  int back = 1;
  std::string items;  // '.' is null; items[0] is slot 1
  std::vector<HwThread> threads;
  auto operator<=>(const HwConfig&) const = default;
};

std::string render_hw(const HwConfig& c) {
  std::string out = "back=" + std::to_string(c.back) + " items=[";
  for (std::size_t k = 0; k < c.items.size(); ++k) {
    if (k) out += ",";
    out += c.items[k] == '.' ? "·" : std::string(1, c.items[k]);
  }
  return out + "]";
}

std::vector<HwConfig> hw_successors(const HwConfig& c, std::size_t k) {
  HwConfig n = c;
  HwThread& t = n.threads[k];
  const int size = static_cast<int>(c.items.size());
  if (t.enqueue) {
    if (t.pc == 0) {
      t.t = n.back++;
      if (t.t > size) return {};  // overflow never happens in the programs checked here
      t.pc = 1;
    } else if (t.pc == 1) {
      n.items[t.t - 1] = t.value;
      t.pc = 2;
    }
    return {n};
  }
  if (t.pc == 0) {
    t.range = n.back - 1;
    t.i = 1;
    if (t.range >= 1) t.pc = 1;
    return {n};
  }
  char& cell = n.items[t.i - 1];
  const char taken = cell;
  cell = '.';
  if (taken != '.') {
    t.pc = 2;
  } else if (t.i < t.range) {
    ++t.i;
  } else {
    t.pc = 0;
  }
  return {n};
}

std::set<std::string> hw_oracle_finals(bool atomic) {
  HwConfig start{1, "....", {{true, 'c'}, {true, 'd'}, {false, 0}}};
  std::set<HwConfig> seen{start};
  std::vector<HwConfig> stack{start};
  std::set<std::string> finals;
  while (!stack.empty()) {
    const HwConfig c = stack.back();
    stack.pop_back();
    bool done = true;
    for (std::size_t k = 0; k < c.threads.size(); ++k) {
      if (c.threads[k].pc == 2) continue;
      done = false;
      std::vector<HwConfig> next;
      if (!atomic) {
        next = hw_successors(c, k);
      } else if (c.threads[k].enqueue) {
        HwConfig n = c;
        n.items[n.back++ - 1] = n.threads[k].value;
        n.threads[k].pc = 2;
        next.push_back(n);
      } else {
        // Atomic dequeue: enabled only when some slot below back holds a value.
        for (int i = 1; i < c.back; ++i) {
          if (c.items[i - 1] == '.') continue;
          HwConfig n = c;
          n.items[i - 1] = '.';
          n.threads[k].pc = 2;
          next.push_back(n);
          break;
        }
      }
      for (auto& n : next) {
        if (seen.insert(n).second) stack.push_back(n);
      }
    }
    if (done) finals.insert(render_hw(c));
  }
  return finals;
}

std::set<std::string> explorer_finals(const StateGraph& g) {
  std::set<std::string> out;
  for (const auto& f : final_states(g)) out.insert(render(f, g.program, g.target.domain()));
  return out;
}

// ---------------------------------------------------------------- naive explorer

// Plain recursive interleaving of straight-line call programs over a step
// machine, without a configuration graph. Paths stop when they revisit a
// configuration of their own prefix.
class NaiveExplorer {
 public:
  NaiveExplorer(const Program& p, const ObjectModel& m) : p_(p), m_(m) {
    for (const auto& t : p.threads) {
      for (const auto& in : t.code) {
        if (in.kind != InstrKind::Call) throw UsageError("naive explorer runs call-only programs");
      }
    }
  }

  void run() {
    Node start{p_.var_init, m_.initial_state(), std::vector<Thread>(p_.threads.size())};
    std::vector<Event> events;
    walk(start, events, 1);
  }

  std::set<std::string> finals;
  std::set<std::string> histories;  // terminated runs: history plus final object state
  bool aborted = false;

 private:
  struct Thread {
    std::size_t pc = 0;
    int phase = 0;  // 0 before invocation, 1 in call
    LocalState local;
    OpId op = 0;
    auto operator<=>(const Thread&) const = default;
  };
  struct Node {
    std::vector<Value> vars;
    State shared;
    std::vector<Thread> threads;
    auto operator<=>(const Node&) const = default;
  };

  void walk(const Node& n, std::vector<Event>& events, OpId next_op) {
    if (!on_path_.insert(n).second) return;
    bool any = false;
    for (std::size_t k = 0; k < n.threads.size(); ++k) {
      const Thread& t = n.threads[k];
      const auto& code = p_.threads[k].code;
      if (t.pc == code.size()) continue;
      any = true;
      const Instr& in = code[t.pc];
      const auto tid = static_cast<ThreadId>(k + 1);
      if (t.phase == 0) {
        Node m = n;
        const Value arg = in.expr ? in.expr->value : Value::unit();
        m.threads[k].phase = 1;
        m.threads[k].local = m_.begin(m_.sequential_spec().method_index(in.method), arg);
        m.threads[k].op = next_op;
        events.push_back(make_invoke(tid, next_op, in.method, arg));
        walk(m, events, next_op + 1);
        events.pop_back();
        continue;
      }
      for (const auto& s : m_.step(n.shared, t.local)) {
        if (s.abort) {
          aborted = true;
          continue;
        }
        Node m = n;
        if (s.shared) m.shared = *s.shared;
        m.threads[k].local = s.local;
        if (!s.ret) {
          walk(m, events, next_op);
          continue;
        }
        if (in.target) m.vars[*in.target] = *s.ret;
        m.threads[k] = Thread{t.pc + 1, 0, {}, 0};
        events.push_back(make_return(tid, t.op, *s.ret));
        walk(m, events, next_op);
        events.pop_back();
      }
    }
    if (!any) {
      const State fin = m_.domain().canonical(n.shared);
      finals.insert(render(FinalState{FinalState::Kind::State, n.vars, fin}, p_, m_.domain()));
      histories.insert(serialize_history(History(events)) + "final " + m_.domain().render(fin) + "\n");
    }
    on_path_.erase(n);
  }

  const Program& p_;
  const ObjectModel& m_;
  std::set<Node> on_path_;
};

void expect_explorer_matches_naive(const std::string& text, std::shared_ptr<const ObjectModel> model) {
  const Program p = parse_program(text);
  NaiveExplorer naive(p, *model);
  naive.run();
  const auto g = build_graph(p, Target::model(model));
  ASSERT_FALSE(g.truncated);
  std::set<std::string> finals = explorer_finals(g);
  if (naive.aborted) naive.finals.insert("abort");
  EXPECT_EQ(lines(finals), lines(naive.finals)) << text;
  std::set<std::string> histories;
  for (const auto& r : recorded_executions(g)) {
    if (r.status != ExecStatus::Terminated) continue;
    histories.insert(serialize_history(r.history) + "final " + g.target.domain().render(*r.final_state) + "\n");
  }
  EXPECT_EQ(histories, naive.histories) << text;
}

Program builtin(std::string_view name) { return parse_program(builtin_program(name)); }

}  // namespace

TEST(FinalStates, OracleMatchesGoldenFiles) {
  EXPECT_EQ(lines(hw_oracle_finals(false)), golden("two_enqueues_hw.txt"));
  EXPECT_EQ(lines(hw_oracle_finals(true)), golden("two_enqueues_atomic.txt"));
}

TEST(FinalStates, ExplorerMatchesGoldenFiles) {
  const Program p = builtin("two-enqueues");
  const auto hw = hw_model(4);
  const auto left = build_graph(p, Target::model(hw));
  const auto right = build_graph(p, Target::atomic(hw->sequential_spec_ptr()));
  EXPECT_EQ(lines(explorer_finals(left)), golden("two_enqueues_hw.txt"));
  EXPECT_EQ(lines(explorer_finals(right)), golden("two_enqueues_atomic.txt"));
}

TEST(NaiveOracle, HwQueuePrograms) {
  expect_explorer_matches_naive(std::string(builtin_program("two-enqueues")), hw_model(4));
  expect_explorer_matches_naive(std::string(builtin_program("enqueue-dequeue")), hw_model(4));
  expect_explorer_matches_naive("thread { call Q.Enqueue('a'); call Q.Enqueue('b') }\nthread { y = Q.Dequeue() }\n",
                                hw_model(2));
}

TEST(NaiveOracle, MsQueuePrograms) {
  expect_explorer_matches_naive("thread { call Q.Enqueue('a') }\nthread { y = Q.Dequeue() }\n", ms_model(3));
  expect_explorer_matches_naive("thread { y = Q.Dequeue() }\nthread { z = Q.Dequeue() }\n", ms_model(2));
  expect_explorer_matches_naive("thread { call Q.Enqueue('a') }\nthread { call Q.Enqueue('b') }\n", ms_model(2));
}

TEST(NaiveOracle, CoarseQueuePrograms) {
  for (const auto& w : random_workloads(5, 11)) expect_explorer_matches_naive(queue_program_text(w), coarse_queue_model(2));
}

TEST(Explorer, EnqueueDequeueObservations) {
  const Program p = builtin("enqueue-dequeue");
  const auto g = build_graph(p, Target::model(hw_model(4)));
  std::set<std::string> traces;
  for (const auto& t : client_traces(g)) traces.insert(to_string(t));
  EXPECT_EQ(lines(traces),
            "t1:arg Q.Dequeue() ; t2:arg Q.Enqueue('c') ; t1:y := 'c'\n"
            "t2:arg Q.Enqueue('c') ; t1:arg Q.Dequeue() ; t1:y := 'c'\n");
}

TEST(Explorer, ThreePhaseDivergesOnlyOnTheFineGrainedQueue) {
  const Program p = builtin("three-phase");
  const auto hw = hw_model(4);
  const auto r = detect_divergence_theorem10(p, hw, hw->sequential_spec_ptr());
  EXPECT_TRUE(r.left.object_cycle);
  EXPECT_TRUE(r.left.fair_object_cycle);
  EXPECT_FALSE(r.left.client_cycle);
  EXPECT_FALSE(r.right.diverges());
  EXPECT_FALSE(r.agree());
  ASSERT_TRUE(r.left.witness);
  EXPECT_EQ(r.left.witness->classification, Classification::ObjectDivergent);
  ASSERT_TRUE(r.left.witness->cycle_start);
  EXPECT_LT(*r.left.witness->cycle_start, r.left.witness->trace.size());
}

TEST(Explorer, PhasesRunInOrder) {
  const Program p = parse_program(
      "phase { thread { call Q.Enqueue('a') } }\nphase { thread { y = Q.Dequeue() } }\n");
  const auto g = build_graph(p, Target::model(hw_model(2)));
  EXPECT_EQ(lines(explorer_finals(g)), "y='a' | back=2 items=[·,·]\n");
}

TEST(Explorer, ClientReadsAndWritesCells) {
  const Program p = parse_program("thread { write Q.items[2] <- 'z'; v = read Q.items[2]; b = read Q.back }\n");
  const auto g = build_graph(p, Target::model(hw_model(2)));
  EXPECT_EQ(lines(explorer_finals(g)), "v='z' b=1 | back=1 items=[·,z]\n");
  const auto bad = build_graph(parse_program("thread { v = read Q.nope }\n"), Target::model(hw_model(2)));
  EXPECT_EQ(lines(explorer_finals(bad)), "abort\n");
}

TEST(Explorer, ClientLoopIsBottom) {
  const Program p = parse_program("thread { while true { skip } }\n");
  const auto g = build_graph(p, Target::model(hw_model(2)));
  EXPECT_EQ(lines(explorer_finals(g)), "bottom\n");
  const auto d = analyze_divergence(g);
  EXPECT_TRUE(d.client_cycle);
  EXPECT_FALSE(d.object_diverges());
  const auto traces = client_traces(g);
  ASSERT_EQ(traces.size(), 1u);
  EXPECT_EQ(traces.begin()->classification, Classification::ClientDivergent);
}

TEST(Explorer, GuardedAtomicDeadlockIsClientSide) {
  const Program p = parse_program("thread { atomic when false { x = 1 } }\n");
  const auto g = build_graph(p, Target::model(hw_model(2)));
  EXPECT_EQ(lines(explorer_finals(g)), "bottom\n");
  EXPECT_TRUE(analyze_divergence(g).client_deadlock);
}

TEST(Explorer, BlockedAtomicCallIsObjectSide) {
  const Program p = parse_program("thread { y = Q.Dequeue() }\n");
  const auto hw = hw_model(2);
  const auto g = build_graph(p, Target::atomic(hw->sequential_spec_ptr()));
  EXPECT_TRUE(final_states(g).empty());
  const auto d = analyze_divergence(g);
  EXPECT_TRUE(d.object_deadlock);
  EXPECT_FALSE(d.client_deadlock);
  const auto fine = build_graph(p, Target::model(hw));
  EXPECT_TRUE(analyze_divergence(fine).object_cycle);
  EXPECT_TRUE(final_states(fine).empty());
}

TEST(Explorer, AbortIsAFinalState) {
  const Program p = parse_program("thread { call Q.Enqueue('a'); call Q.Enqueue('b') }\n");
  const auto g = build_graph(p, Target::model(hw_model(1)));
  EXPECT_EQ(lines(explorer_finals(g)), "abort\n");
  ASSERT_TRUE(g.abort_node);
  const auto execs = recorded_executions(g);
  ASSERT_EQ(execs.size(), 1u);
  EXPECT_EQ(execs[0].status, ExecStatus::Incomplete);
  EXPECT_EQ(serialize_history(execs[0].history),
            "t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\nt=1 op=2 inv Enqueue 'b'\nt=1 op=2 abort\n");
}

TEST(Explorer, EvaluationErrorAborts) {
  const Program p = parse_program("thread { x = 'a' + 1 }\n");
  EXPECT_EQ(lines(explorer_finals(build_graph(p, Target::model(hw_model(1))))), "abort\n");
}

TEST(Explorer, BoundTruncates) {
  ExploreOptions opts;
  opts.bound = 10;
  const auto g = build_graph(builtin("two-enqueues"), Target::model(hw_model(4)), opts);
  EXPECT_TRUE(g.truncated);
  EXPECT_LE(g.transitions, 10u);
}

TEST(Explorer, RejectsUnknownMethodsAndBadInitialStates) {
  EXPECT_THROW(build_graph(parse_program("thread { call Q.Push(1) }\n"), Target::model(hw_model(2))), UsageError);
  MSQueueState bad = MSQueueState::fresh(3);
  bad.nodes[0].next = 0;
  EXPECT_THROW(build_graph(builtin("two-enqueues"), Target::model(ms_model(3)), {}, bad.encode()), UsageError);
}

TEST(Explorer, ReplayFollowsASchedule) {
  const auto g = build_graph(builtin("enqueue-dequeue"), Target::model(hw_model(4)));
  // Enqueue runs first (arg, inv, L1, L2, ret); then the dequeue finds 'c'.
  const auto r = replay(g, {2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1});
  EXPECT_EQ(r.classification, Classification::Terminated);
  ASSERT_TRUE(r.final_config);
  const auto rec = to_recorded(g, r);
  EXPECT_EQ(rec.status, ExecStatus::Terminated);
  EXPECT_EQ(serialize_history(rec.history),
            "t=2 op=1 inv Enqueue 'c'\nt=2 op=1 ret unit\nt=1 op=2 inv Dequeue unit\nt=1 op=2 ret 'c'\n");
  EXPECT_THROW(replay(g, {3}), UsageError);
  EXPECT_EQ(replay(g, {1}).classification, Classification::BudgetExhausted);
}

TEST(Explorer, HwQueueIsPurelyBlocking) {
  for (const char* name : {"two-enqueues", "enqueue-dequeue", "three-phase"}) {
    const auto g = build_graph(builtin(name), Target::model(hw_model(4)));
    EXPECT_TRUE(purely_blocking_violations(g).empty()) << name;
  }
}

TEST(Explorer, MsQueueStaysWellFormedAtQuiescentPoints) {
  const auto all = two_by_two_workloads();
  for (std::size_t k = 0; k < all.size(); k += 5) {
    const auto g = build_graph(parse_program(queue_program_text(all[k])), Target::model(ms_model(4)));
    EXPECT_TRUE(ill_formed_quiescent_states(g).empty());
  }
}

TEST(Explorer, EnumerationClassifiesEveryRun) {
  const auto g = build_graph(builtin("enqueue-dequeue"), Target::model(hw_model(4)));
  std::map<Classification, std::size_t> kinds;
  for (const auto& r : enumerate_executions(g)) ++kinds[r.classification];
  EXPECT_GT(kinds[Classification::Terminated], 0u);
  EXPECT_GT(kinds[Classification::ObjectDivergent], 0u);
  EXPECT_EQ(kinds[Classification::BudgetExhausted], 0u);
}

TEST(Explorer, RecordedExecutionsOfTwoEnqueues) {
  const auto hw = hw_model(4);
  const auto g = build_graph(builtin("two-enqueues"), Target::model(hw));
  const auto execs = recorded_executions(g);
  for (const auto& e : execs) {
    EXPECT_EQ(e.status, ExecStatus::Terminated);
    EXPECT_TRUE(is_complete(e.history));
  }
  const auto report = check_strict(execs, hw->sequential_spec());
  EXPECT_FALSE(report.passed);
  const auto queue = adt_queue();
  EXPECT_TRUE(check_general(execs, *queue, af_hw_queue(), RenamingFunction::identity(hw->methods())).passed);
  EXPECT_GE(recorded_executions(g, true).size(), execs.size());
}

TEST(Equivalence, CoarseQueueIsEquivalentToItsAtomicVersion) {
  const auto coarse = coarse_queue_model(4);
  const auto r = compare_theorem6(builtin("two-enqueues"), coarse, coarse->sequential_spec_ptr());
  EXPECT_TRUE(r.traces.equal);
  EXPECT_TRUE(r.finals.equal);
  EXPECT_EQ(r.left_name, "coarse-queue");
  EXPECT_EQ(r.right_name, "Ato(coarse-queue-seq)");
}

TEST(Equivalence, HwQueueHasExtraFinalStates) {
  const auto hw = hw_model(4);
  const auto r = compare_theorem6(builtin("two-enqueues"), hw, hw->sequential_spec_ptr());
  EXPECT_FALSE(r.finals.equal);
  EXPECT_EQ(r.finals.only_left.size(), 2u);
  EXPECT_TRUE(r.finals.only_right.empty());
}
