#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slin/spec.hpp"

namespace slin {

/// Per-operation local state: program counter plus a few registers
/// (argument first). Models document their own register layout.
struct LocalState {
  std::uint8_t method = 0;
  std::uint8_t pc = 0;
  std::array<Value, 5> regs{};

  friend bool operator==(const LocalState&, const LocalState&) = default;
  friend auto operator<=>(const LocalState&, const LocalState&) = default;
};

std::size_t hash_value(const LocalState& l);

/// One atomic step of an operation body. `shared` is set iff the step writes
/// the object state. A step with `ret` is the operation's response; a step
/// with `abort` ends the whole execution in the error state.
struct Step {
  LocalState local;
  std::optional<State> shared;
  std::optional<Value> ret;
  bool abort = false;
  std::string_view action;  // static descriptor, empty for a bare return
};

/// Executable fine-grained object: one step machine per method over
/// (shared state, local state), with a companion sequential specification.
class ObjectModel {
 public:
  ObjectModel(std::string name, std::shared_ptr<const SeqSpec> companion)
      : name_(std::move(name)), companion_(std::move(companion)) {}
  virtual ~ObjectModel() = default;

  const std::string& name() const { return name_; }
  const SeqSpec& sequential_spec() const { return *companion_; }
  std::shared_ptr<const SeqSpec> sequential_spec_ptr() const { return companion_; }
  const StateDomain& domain() const { return companion_->domain(); }
  const std::vector<MethodDecl>& methods() const { return companion_->methods(); }

  virtual State initial_state() const = 0;
  virtual LocalState begin(std::size_t method, const Value& arg) const = 0;
  virtual std::vector<Step> step(const State& shared, const LocalState& local) const = 0;

 private:
  std::string name_;
  std::shared_ptr<const SeqSpec> companion_;
};

struct IsolationResult {
  std::set<Outcome> outcomes;  // canonical final states; aborted outcomes included
  bool diverges = false;       // some schedule of this operation alone never returns
  bool diverging_run_modifies_state = false;
  std::size_t steps = 0;
};

/// Runs one operation alone from `shared` until it returns, aborts, or
/// revisits a (shared, local) pair.
IsolationResult run_in_isolation(const ObjectModel& model, const State& shared,
                                 const LocalState& start, std::size_t max_steps = 100000);
IsolationResult run_in_isolation(const ObjectModel& model, const State& shared,
                                 std::size_t method, const Value& arg,
                                 std::size_t max_steps = 100000);

/// Companion-spec agreement: the isolation outcomes equal the specification's
/// outcome set, and isolation diverges exactly where the specification is undefined.
struct AgreementMismatch {
  State state;
  std::string method;
  Value input;
  std::string detail;
};
std::optional<AgreementMismatch> check_companion_agreement(const ObjectModel& model,
                                                           std::span<const State> states,
                                                           std::span<const Value> alphabet);

}  // namespace slin
