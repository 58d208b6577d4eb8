#include "slin/reproduce.hpp"

#include <map>

#include "slin/domains.hpp"
#include "slin/models.hpp"
#include "slin/oracle.hpp"
#include "slin/registry.hpp"
#include "slin/workloads.hpp"

namespace slin {
namespace {

constexpr std::string_view kTwoEnqueues =
    "# Two enqueuers and a dequeuer running concurrently on a fresh queue.\n"
    "thread { call Q.Enqueue('c') }\n"
    "thread { call Q.Enqueue('d') }\n"
    "thread { call Q.Dequeue() }\n";

constexpr std::string_view kThreePhase =
    "# Three phases; no phase starts before the previous one has finished.\n"
    "# The middle phase writes the first array cell directly.\n"
    "var x = 'x'\n"
    "\n"
    "phase {\n"
    "  thread { call Q.Enqueue('c') }\n"
    "  thread { call Q.Enqueue('d') }\n"
    "  thread { call Q.Dequeue() }\n"
    "}\n"
    "phase {\n"
    "  thread { write Q.items[1] <- x }\n"
    "}\n"
    "phase {\n"
    "  thread { call Q.Dequeue() }\n"
    "  thread { call Q.Dequeue() }\n"
    "}\n";

constexpr std::string_view kEnqueueDequeue =
    "# A dequeue racing a single enqueue. The value seen by y tells the two\n"
    "# queue implementations apart.\n"
    "thread { y = Q.Dequeue() }\n"
    "thread { call Q.Enqueue('c') }\n";

// Enqueue('c') reserves slot 1 and stops before storing; Enqueue('d') runs to
// completion in slot 2; the dequeuer scans, finds d, returns; then 'c' is stored.
const std::vector<ThreadId> kOvertakeSchedule{1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 1, 1};

using Lines = std::vector<std::string>;

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> rendered_finals(const StateGraph& g) {
  std::vector<std::string> out;
  for (const auto& f : final_states(g)) out.push_back(render(f, g.program, g.target.domain()));
  return out;
}

ReproductionResult final_state_sets(const ExploreOptions& opts) {
  const Program p = parse_program(kTwoEnqueues);
  const auto hw = hw_model(4);
  const auto left = build_graph(p, Target::model(hw), opts);
  const auto right = build_graph(p, Target::atomic(hw->sequential_spec_ptr()), opts);
  const auto lf = final_states(left);
  const auto rf = final_states(right);
  bool subset = true;
  for (const auto& f : rf) subset = subset && lf.contains(f);
  ReproductionResult r{"fig2", false, {}};
  r.lines.push_back("P(" + left.target.name() + "): " + std::to_string(lf.size()) + " final states");
  for (const auto& s : rendered_finals(left)) r.lines.push_back("  " + s);
  r.lines.push_back("P(" + right.target.name() + "): " + std::to_string(rf.size()) + " final states");
  for (const auto& s : rendered_finals(right)) r.lines.push_back("  " + s);
  r.lines.push_back("atomic final states contained in fine-grained ones: " + yes_no(subset));
  r.passed = !left.truncated && !right.truncated && lf.size() == 4 && rf.size() == 2 && subset;
  return r;
}

ReproductionResult overtaking_execution(const ExploreOptions& opts) {
  const Program p = parse_program(kTwoEnqueues);
  const auto hw = hw_model(4);
  const auto g = build_graph(p, Target::model(hw), opts);
  const auto run = replay(g, kOvertakeSchedule);
  const RecordedExecution exec = to_recorded(g, run);
  const auto& d = g.target.domain();
  ReproductionResult r{"fig3", false, {}};
  std::string schedule;
  for (ThreadId t : kOvertakeSchedule) schedule += std::to_string(t);
  r.lines.push_back("schedule: " + schedule);
  for (const auto& e : exec.history.events()) r.lines.push_back("  " + to_string(e));
  if (exec.status != ExecStatus::Terminated) {
    r.lines.push_back("schedule does not terminate the program");
    return r;
  }
  const std::string recorded = d.render(*exec.final_state);
  r.lines.push_back("recorded final state: " + recorded);

  const auto queue = adt_queue();
  const RecordedExecution one[]{exec};
  const auto general = check_general(one, *queue, af_hw_queue(), RenamingFunction::identity(hw->methods()));
  r.lines.push_back("general linearizability vs " + queue->name() + ": " + (general.passed ? "PASS" : "FAIL"));
  if (general.passed && general.executions[0].witness) {
    r.lines.push_back("  witness: " + join([&] {
      std::vector<std::string> ev;
      for (const auto& e : general.executions[0].witness->witness.events()) ev.push_back(to_string(e));
      return ev;
    }(), " ; "));
  }

  const auto& seq = hw->sequential_spec();
  const auto strict = find_strict_linearization(exec, seq);
  r.lines.push_back("strict linearizability vs " + seq.name() + ": " + (strict ? "PASS" : "FAIL"));
  const auto plain = find_linearization(exec, seq);
  std::vector<std::string> legal;
  if (plain) {
    for (const auto& s : plain->finals) legal.push_back(d.render(s));
  }
  r.lines.push_back("  legal final states of the linearization: " + join(legal, ", "));

  const HWQueueState rec = HWQueueState::decode(*exec.final_state);
  bool gap = plain && !plain->finals.empty();
  if (plain) {
    for (const auto& s : plain->finals) {
      const HWQueueState l = HWQueueState::decode(s);
      gap = gap && l.items[1] == Value::symbol("c") && l.items[0].is_null() && l.items[2].is_null();
    }
  }
  gap = gap && rec.items[0] == Value::symbol("c") && rec.items[1].is_null() && rec.items[2].is_null();
  r.lines.push_back("gap: recorded items[1]='c', legal items[2]='c': " + yes_no(gap));
  r.passed = general.passed && !strict && gap;
  return r;
}

ReproductionResult phase_divergence(const ExploreOptions& opts) {
  const Program p = parse_program(kThreePhase);
  const auto hw = hw_model(4);
  const auto rep = detect_divergence_theorem10(p, hw, hw->sequential_spec_ptr(), opts);
  ReproductionResult r{"sec52-divergence", false, {}};
  const bool left = rep.left.object_diverges();
  const bool right = rep.right.diverges();
  r.lines.push_back(std::string("P(HW): ") + (left ? "divergent schedule found" : "all schedules terminate") +
                    "; P(Ato_HW): " + (right ? "divergent schedule found" : "all schedules terminate"));
  r.lines.push_back("  " + rep.left_name + ": object cycle " + yes_no(rep.left.object_cycle) +
                    ", fair " + yes_no(rep.left.fair_object_cycle) + ", object deadlock " +
                    yes_no(rep.left.object_deadlock) + ", client divergence " +
                    yes_no(rep.left.client_cycle || rep.left.client_deadlock));
  r.lines.push_back("  " + rep.right_name + ": object cycle " + yes_no(rep.right.object_cycle) +
                    ", object deadlock " + yes_no(rep.right.object_deadlock) + ", client divergence " +
                    yes_no(rep.right.client_cycle || rep.right.client_deadlock));
  if (rep.left.witness) {
    r.lines.push_back("  witness: " + std::to_string(rep.left.witness->trace.size()) + " events, cycle from event " +
                      std::to_string(rep.left.witness->cycle_start.value_or(0) + 1));
  }
  r.passed = left && !right && !rep.left.truncated && !rep.right.truncated;
  return r;
}

std::set<Value> final_values(const StateGraph& g, std::size_t var) {
  std::set<Value> out;
  for (const auto& f : final_states(g)) {
    if (f.kind == FinalState::Kind::State) out.insert(f.vars[var]);
  }
  return out;
}

std::string value_set(const std::set<Value>& vs) {
  std::vector<std::string> items;
  for (const auto& v : vs) items.push_back(to_string(v));
  return "{" + join(items, ", ") + "}";
}

ReproductionResult client_observation(const ExploreOptions& opts) {
  const Program p = parse_program(kEnqueueDequeue);
  const auto left = build_graph(p, Target::model(hw_model(4)), opts);
  const auto right = build_graph(p, Target::atomic(adt_queue()), opts);
  const auto lv = final_values(left, 0);
  const auto rv = final_values(right, 0);
  ReproductionResult r{"sec62-observation", false, {}};
  r.lines.push_back("final y over P(" + left.target.name() + "): " + value_set(lv));
  r.lines.push_back("final y over P(" + right.target.name() + "): " + value_set(rv));
  for (const auto& t : client_traces(left, opts)) r.lines.push_back("  " + left.target.name() + ": " + to_string(t));
  for (const auto& t : client_traces(right, opts)) r.lines.push_back("  " + right.target.name() + ": " + to_string(t));
  r.lines.push_back("observably different: " + yes_no(lv != rv));
  const Value c = Value::symbol("c");
  r.passed = lv == std::set<Value>{c} && rv == std::set<Value>{c, Value::empty()};
  return r;
}

ReproductionResult transitivity_fuzz(const ExploreOptions&) {
  const auto triples = linearizable_triples(1000, 20240601);
  std::size_t construction = 0;
  std::size_t failures = 0;
  std::size_t oracle = 0;
  for (const auto& t : triples) {
    if (!linearizes(t.h1, t.h2) || !linearizes(t.h2, t.h3)) ++construction;
    const bool direct = linearizes(t.h1, t.h3);
    if (!direct) ++failures;
    if (direct != linearizes_by_bijection(t.h1, t.h3)) ++oracle;
  }
  ReproductionResult r{"prop2-fuzz", false, {}};
  r.lines.push_back("triples: " + std::to_string(triples.size()));
  r.lines.push_back("premise violations: " + std::to_string(construction));
  r.lines.push_back("transitivity failures: " + std::to_string(failures));
  r.lines.push_back("disagreements with the bijection oracle: " + std::to_string(oracle));
  r.passed = construction == 0 && failures == 0 && oracle == 0;
  return r;
}

ReproductionResult oracle_equivalence(const ExploreOptions&) {
  const auto queue = adt_queue();
  const auto candidates = queue_candidates();
  const State start = queue->initial_state();
  std::size_t total = 0;
  std::size_t linearizable = 0;
  std::size_t disagreements = 0;
  std::optional<History> first;
  for_each_queue_history(5, [&](const History& h) {
    ++total;
    const bool fast = find_linearization(h, *queue, start).has_value();
    const bool slow = brute_force_legal_witness(h, *queue, start, candidates).has_value();
    linearizable += fast;
    if (fast != slow) {
      ++disagreements;
      if (!first) first = h;
    }
    return true;
  });
  ReproductionResult r{"oracle-equivalence", false, {}};
  r.lines.push_back("histories: " + std::to_string(total));
  r.lines.push_back("linearizable: " + std::to_string(linearizable));
  r.lines.push_back("disagreements: " + std::to_string(disagreements));
  if (first) {
    for (const auto& e : first->events()) r.lines.push_back("  " + to_string(e));
  }
  r.passed = disagreements == 0;
  return r;
}

ReproductionResult ms_queue_checks(const ExploreOptions& opts) {
  const std::size_t pool = 4;
  const auto ms = ms_model(pool);
  const auto& seq = ms->sequential_spec();
  const auto pseudo = adt_pseudo_queue();
  const auto multiset = adt_multiset();
  const std::vector<Value> alphabet{Value::symbol("a"), Value::symbol("b")};
  const auto states = seq.domain().enumerate(alphabet);
  const auto pseudo_af = af_pseudo();
  const auto multiset_af = af_multiset();
  const auto pseudo_rf = default_renaming(seq, *pseudo);
  const auto multiset_rf = default_renaming(seq, *multiset);

  std::size_t programs = 0;
  std::size_t executions = 0;
  std::size_t strict_fail = 0;
  std::size_t pseudo_fail = 0;
  std::size_t multiset_fail = 0;
  std::size_t ill_formed = 0;
  bool refinement_pseudo = true;
  bool refinement_multiset = true;
  std::vector<std::string> failing;
  for (const auto& w : two_by_two_workloads()) {
    const Program p = parse_program(queue_program_text(w));
    const auto g = build_graph(p, Target::model(ms), opts);
    if (g.truncated) throw UsageError("exploration bound exceeded");
    ++programs;
    ill_formed += ill_formed_quiescent_states(g).size();
    const auto execs = recorded_executions(g, false, opts);
    executions += execs.size();
    const auto a = check_strict(execs, seq);
    const auto b = check_concurrent_implementation(execs, seq, *pseudo, pseudo_af, pseudo_rf, states, alphabet);
    const auto c = check_concurrent_implementation(execs, seq, *multiset, multiset_af, multiset_rf, states, alphabet);
    strict_fail += a.failures();
    pseudo_fail += b.failures();
    multiset_fail += c.failures();
    refinement_pseudo = refinement_pseudo && b.refinement->passed;
    refinement_multiset = refinement_multiset && c.refinement->passed;
    if (!a.passed || !b.passed || !c.passed) failing.push_back(queue_program_text(w));
  }
  const auto inj = scan_injectivity(pseudo_af, states);

  ReproductionResult r{"propH-msqueue-strict", false, {}};
  r.lines.push_back("programs: " + std::to_string(programs) + ", terminated executions: " + std::to_string(executions));
  r.lines.push_back("(a) strict vs " + seq.name() + ": " + std::to_string(strict_fail) + " failures");
  r.lines.push_back("(b) implementation of " + pseudo->name() + " via " + pseudo_af.name + ": " +
                    std::to_string(pseudo_fail) + " failures, refinement " + (refinement_pseudo ? "holds" : "fails"));
  r.lines.push_back("    injectivity scan over " + std::to_string(states.size()) + " states: " +
                    std::to_string(inj.collisions.size()) + " collisions");
  r.lines.push_back("(c) implementation of " + multiset->name() + " via " + multiset_af.name + ": " +
                    std::to_string(multiset_fail) + " failures, refinement " +
                    (refinement_multiset ? "holds" : "fails"));
  r.lines.push_back("ill-formed quiescent states: " + std::to_string(ill_formed));
  for (const auto& f : failing) r.lines.push_back("  failing program: " + f.substr(0, f.size() - 1));
  r.passed = strict_fail == 0 && pseudo_fail == 0 && multiset_fail == 0 && refinement_pseudo &&
             refinement_multiset && inj.injective() && ill_formed == 0 && programs == 65;
  return r;
}

void equivalence_lines(ReproductionResult& r, const std::string& label, const Theorem6Report& t) {
  r.lines.push_back(label + ": " + t.left_name + " vs " + t.right_name + ": traces " +
                    (t.traces.equal ? "equal" : "differ") + ", final states " + (t.finals.equal ? "equal" : "differ"));
  for (const auto& s : t.finals.only_left) r.lines.push_back("  only " + t.left_name + ": " + s);
  for (const auto& s : t.finals.only_right) r.lines.push_back("  only " + t.right_name + ": " + s);
}

ReproductionResult equivalence_control(const ExploreOptions& opts) {
  ReproductionResult r{"thm6-control", false, {}};
  const auto coarse = coarse_queue_model(4);
  const Program two_enqueues = parse_program(kTwoEnqueues);
  bool ok = true;
  const auto base = compare_theorem6(two_enqueues, coarse, coarse->sequential_spec_ptr(), opts);
  equivalence_lines(r, "two-enqueues", base);
  ok = ok && base.traces.equal && base.finals.equal && !base.truncated;
  std::size_t k = 0;
  for (const auto& w : random_workloads(3, 7)) {
    const std::string text = queue_program_text(w);
    const auto rep = compare_theorem6(parse_program(text), coarse, coarse->sequential_spec_ptr(), opts);
    equivalence_lines(r, "generated " + std::to_string(++k), rep);
    std::string flat = text;
    for (auto& ch : flat) if (ch == '\n') ch = ' ';
    r.lines.push_back("  program: " + flat.substr(0, flat.size() - 1));
    ok = ok && rep.traces.equal && rep.finals.equal && !rep.truncated;
  }
  const auto hw = hw_model(4);
  const auto neg = compare_theorem6(two_enqueues, hw, hw->sequential_spec_ptr(), opts);
  equivalence_lines(r, "two-enqueues", neg);
  ok = ok && !neg.finals.equal;
  r.passed = ok;
  return r;
}

using Runner = ReproductionResult (*)(const ExploreOptions&);

const std::map<std::string, Runner, std::less<>>& runners() {
  static const std::map<std::string, Runner, std::less<>> m{
      {"fig2", final_state_sets},
      {"fig3", overtaking_execution},
      {"sec62-observation", client_observation},
      {"sec52-divergence", phase_divergence},
      {"prop2-fuzz", transitivity_fuzz},
      {"oracle-equivalence", oracle_equivalence},
      {"propH-msqueue-strict", ms_queue_checks},
      {"thm6-control", equivalence_control},
  };
  return m;
}

}  // namespace

std::string_view builtin_program(std::string_view name) {
  if (name == "two-enqueues") return kTwoEnqueues;
  if (name == "three-phase") return kThreePhase;
  if (name == "enqueue-dequeue") return kEnqueueDequeue;
  throw UsageError("unknown built-in program '" + std::string(name) + "'");
}

const std::vector<ReproductionInfo>& reproductions() {
  static const std::vector<ReproductionInfo> list{
      {"fig2", "final states of two enqueues and a dequeue: fine-grained vs atomic HW queue"},
      {"fig3", "one HW execution: general linearizable, not strict linearizable"},
      {"sec62-observation", "a client sees y='c' only on the HW queue, 'c' or EMPTY on an atomic queue"},
      {"sec52-divergence", "three-phase program diverges on the HW queue, terminates on its atomic version"},
      {"prop2-fuzz", "transitivity of the linearizability relation on 1000 generated triples"},
      {"oracle-equivalence", "linearization search vs brute force on every small two-thread queue history"},
      {"propH-msqueue-strict", "MS queue: strict, pseudo-queue and multiset checks on 2x2 workloads"},
      {"thm6-control", "observational equivalence for the coarse queue, inequality for the HW queue"},
  };
  return list;
}

ReproductionResult reproduce(std::string_view name, const ExploreOptions& opts) {
  const auto& m = runners();
  const auto it = m.find(name);
  if (it == m.end()) throw UsageError("unknown reproduction '" + std::string(name) + "'");
  return it->second(opts);
}

}  // namespace slin
