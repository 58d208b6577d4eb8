#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "slin/history.hpp"
#include "slin/spec.hpp"

namespace slin {

enum class ExecStatus { Terminated, Incomplete };

/// (initial state, history, final state) of one run. Terminated runs have a
/// complete history and a final state; incomplete ones (aborted, divergent,
/// cut short) have neither guarantee.
struct RecordedExecution {
  State initial;
  History history;
  ExecStatus status = ExecStatus::Incomplete;
  std::optional<State> final_state;
};

/// A completion of the history, a sequential witness it linearizes to, and the
/// final states the specification allows at the end of the witness.
struct Linearization {
  History completion;
  History witness;
  std::set<State> finals;
};

/// Depth-first search over (operations already linearized, specification state).
/// Only operations whose happened-before predecessors are linearized may go
/// next, tried in ascending operation id. Pending operations are either left
/// out or linearized with any outcome the specification allows. When
/// `required_final` is set, the witness must be able to end in that state
/// (compared in canonical form).
std::optional<Linearization> find_linearization(const History& h, const SeqSpec& spec,
                                                const State& start,
                                                const std::optional<State>& required_final = {});
std::optional<Linearization> find_linearization(const RecordedExecution& exec, const SeqSpec& spec);

/// Requires a terminated execution (UsageError otherwise); the witness must
/// reach the recorded final state.
std::optional<Linearization> find_strict_linearization(const RecordedExecution& exec,
                                                       const SeqSpec& spec);

struct ExecutionVerdict {
  std::size_t index = 0;
  bool passed = true;
  std::optional<Linearization> witness;
  std::string note;  // which condition failed, empty on success
};

struct CheckReport {
  std::string mode;  // "strict", "general" or "impl"
  std::string spec;  // specification or ADT checked against
  bool passed = true;
  std::vector<ExecutionVerdict> executions;
  std::optional<RefinementVerdict> refinement;  // impl mode only

  std::size_t failures() const;
  const ExecutionVerdict* first_failure() const;
};

CheckReport check_strict(std::span<const RecordedExecution> execs, const SeqSpec& spec);

CheckReport check_general(std::span<const RecordedExecution> execs, const SeqSpec& adt,
                          const AbstractionFunction& af, const RenamingFunction& rf);

/// (a) sequential implementation over `states`, (b) general linearizability,
/// (c) each terminated run has an abstract witness ending in AF(final state).
CheckReport check_concurrent_implementation(std::span<const RecordedExecution> execs,
                                            const SeqSpec& model_spec, const SeqSpec& adt,
                                            const AbstractionFunction& af,
                                            const RenamingFunction& rf,
                                            std::span<const State> states,
                                            std::span<const Value> alphabet);

}  // namespace slin
