#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slin/checker.hpp"
#include "slin/model.hpp"
#include "slin/program.hpp"

namespace slin {

/// What services the method calls of a program: a fine-grained step machine,
/// or the atomic version of a specification (each call one transition,
/// enabled only inside the method's domain).
class Target {
 public:
  static Target model(std::shared_ptr<const ObjectModel> m);
  static Target atomic(std::shared_ptr<const SeqSpec> s);

  bool is_atomic() const { return !model_; }
  const ObjectModel* object_model() const { return model_.get(); }
  const SeqSpec& spec() const { return *spec_; }
  const StateDomain& domain() const { return spec_->domain(); }
  const std::vector<MethodDecl>& methods() const { return spec_->methods(); }
  State initial_state() const;
  /// `hw-queue` or `Ato(hw-queue-seq)`.
  std::string name() const;

 private:
  std::shared_ptr<const ObjectModel> model_;
  std::shared_ptr<const SeqSpec> spec_;
};

struct ThreadState {
  enum class Mode : std::uint8_t { AtInstr, ArgReady, InCall, HasResult };
  std::uint32_t pc = 0;
  Mode mode = Mode::AtInstr;
  LocalState local;  // step-machine state while InCall on a model
  Value reg;         // evaluated argument, then the returned value

  friend bool operator==(const ThreadState&, const ThreadState&) = default;
};

/// (client variables, object state, per-thread control). The abort
/// configuration is a single sentinel.
struct Config {
  std::vector<Value> vars;
  State shared;
  std::vector<ThreadState> threads;
  bool aborted = false;

  friend bool operator==(const Config&, const Config&) = default;
};

std::size_t hash_value(const Config& c);

/// Events of a transition. Object events carry operation id 0 as a
/// placeholder; ids are assigned per path when executions are enumerated.
struct Transition {
  std::size_t target = 0;
  ThreadId thread = 0;
  std::vector<Event> events;
  bool object = false;  // performed by the object (invocation, body step, response)
};

enum class NodeKind : std::uint8_t {
  Running,     // has transitions
  Terminated,  // every thread finished
  Aborted,     // the sentinel
  Deadlock,    // unfinished threads, none enabled
  Unexplored,  // not expanded: transition budget exhausted
};

struct ExploreOptions {
  std::size_t bound = 200000;  // transitions in the configuration graph
  std::size_t path_budget = 5000000;  // DFS steps when enumerating executions
};

/// Reachable configuration graph of a program. Threads are numbered from 1 in
/// program order.
struct StateGraph {
  Program program;
  Target target;
  std::vector<Config> nodes;  // nodes[0] is the initial configuration
  std::vector<NodeKind> kinds;
  std::vector<std::vector<Transition>> edges;
  /// Deadlocked nodes where some thread waits on a method call outside its domain.
  std::vector<bool> blocked_in_call;
  std::optional<std::size_t> abort_node;
  std::size_t transitions = 0;
  bool truncated = false;
};

/// Initial object state defaults to the target's own. Throws UsageError if the
/// program calls methods the target lacks.
StateGraph build_graph(const Program& p, const Target& target, ExploreOptions opts = {},
                       const std::optional<State>& initial = std::nullopt);

enum class Classification { Terminated, ClientDivergent, ObjectDivergent, Aborted, BudgetExhausted };
std::string to_string(Classification c);

/// One explored run. Divergent runs are lassos: `trace[cycle_start..]` repeats
/// forever. Deadlocked runs end without a cycle.
struct ExecutionResult {
  std::vector<Event> trace;
  Classification classification = Classification::Terminated;
  std::optional<std::size_t> cycle_start;
  std::optional<Config> final_config;  // Terminated only

  friend bool operator==(const ExecutionResult&, const ExecutionResult&) = default;
};

/// Every execution up to repetition of a configuration on the current path.
std::vector<ExecutionResult> enumerate_executions(const StateGraph& g, ExploreOptions opts = {});

/// Client-side trace: client events of a terminated, aborted or client-divergent run.
struct ClientTrace {
  std::vector<Event> events;
  Classification classification = Classification::Terminated;
  std::optional<std::size_t> cycle_start;

  friend auto operator<=>(const ClientTrace&, const ClientTrace&) = default;
};
std::string to_string(const ClientTrace& t);

std::set<ClientTrace> client_traces(const StateGraph& g, ExploreOptions opts = {});

/// Member of a final-state set: a terminated (client, object) state, the abort
/// marker, or ⊥ for client divergence. Object states are canonical.
struct FinalState {
  enum class Kind : std::uint8_t { State, Abort, Bottom };
  Kind kind = Kind::State;
  std::vector<Value> vars;
  State shared;

  friend auto operator<=>(const FinalState&, const FinalState&) = default;
};
std::set<FinalState> final_states(const StateGraph& g);
std::string render(const FinalState& f, const Program& p, const StateDomain& d);

/// History of every terminated and aborted run. With `include_divergent`, also
/// the histories of divergent and deadlocked runs as incomplete executions.
/// States are canonical.
std::vector<RecordedExecution> recorded_executions(const StateGraph& g, bool include_divergent = false,
                                                   ExploreOptions opts = {});

struct DivergenceReport {
  bool client_cycle = false;
  bool object_cycle = false;
  bool fair_object_cycle = false;  // every thread steps in the cycle, or is done or blocked there
  bool client_deadlock = false;
  bool object_deadlock = false;
  bool truncated = false;
  std::optional<ExecutionResult> witness;

  bool diverges() const { return client_cycle || object_cycle || client_deadlock || object_deadlock; }
  bool object_diverges() const { return object_cycle || object_deadlock; }
};
DivergenceReport analyze_divergence(const StateGraph& g);

/// Follows a schedule of thread ids from the initial configuration, taking the
/// first transition of the named thread at each step. Throws UsageError when
/// the thread has none.
ExecutionResult replay(const StateGraph& g, const std::vector<ThreadId>& schedule);

/// Recorded execution of a finite replayed run (initial and final states canonical).
RecordedExecution to_recorded(const StateGraph& g, const ExecutionResult& r);

struct SetComparison {
  bool equal = true;
  std::vector<std::string> only_left;
  std::vector<std::string> only_right;
};

struct Theorem6Report {
  std::string left_name;
  std::string right_name;
  SetComparison traces;
  SetComparison finals;
  std::vector<std::string> left_finals;
  std::vector<std::string> right_finals;
  bool truncated = false;
};

/// MT and MS of P(model) against P(atomic spec).
Theorem6Report compare_theorem6(const Program& p, std::shared_ptr<const ObjectModel> model,
                                std::shared_ptr<const SeqSpec> spec, ExploreOptions opts = {},
                                const std::optional<State>& initial = std::nullopt);

struct Theorem10Report {
  std::string left_name;
  std::string right_name;
  DivergenceReport left;
  DivergenceReport right;
  bool agree() const { return left.diverges() == right.diverges(); }
};

Theorem10Report detect_divergence_theorem10(const Program& p, std::shared_ptr<const ObjectModel> model,
                                            std::shared_ptr<const SeqSpec> spec, ExploreOptions opts = {},
                                            const std::optional<State>& initial = std::nullopt);

/// Pending operations that, run alone from some reachable configuration, can
/// run forever while changing the object state.
struct PurelyBlockingViolation {
  std::size_t node;
  ThreadId thread;
};
std::vector<PurelyBlockingViolation> purely_blocking_violations(const StateGraph& g);

/// MS-queue style well-formedness of every reachable object state at a quiescent point
/// (no thread inside a call); returns the offending node ids.
std::vector<std::size_t> ill_formed_quiescent_states(const StateGraph& g);

}  // namespace slin
