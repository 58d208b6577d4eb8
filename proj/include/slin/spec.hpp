#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "slin/history.hpp"
#include "slin/value.hpp"

namespace slin {

/// Raised when an abstraction function is applied outside the well-formed states.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Layout, rendering and well-formedness of one family of states. Shared
/// between an object model and its companion sequential specification so both
/// sides of a comparison speak about the same states.
class StateDomain {
 public:
  virtual ~StateDomain() = default;

  virtual std::string render(const State& s) const = 0;
  virtual State parse(std::string_view text) const = 0;
  virtual bool is_well_formed(const State&) const { return true; }
  /// Representative used when states are compared across executions
  /// (for linked structures: nodes renamed in list order, garbage dropped).
  virtual State canonical(const State& s) const { return s; }

  /// Exposed cells for direct client access (e.g. `items[1]`).
  virtual std::optional<Value> read_cell(const State&, std::string_view) const {
    return std::nullopt;
  }
  virtual std::optional<State> write_cell(const State&, std::string_view, const Value&) const {
    return std::nullopt;
  }

  /// Desk-scale sample of well-formed states over `alphabet`, in canonical form.
  virtual std::vector<State> enumerate(std::span<const Value> alphabet) const = 0;
};

struct MethodDecl {
  std::string name;
  bool takes_input = false;
};

struct Outcome {
  State state;
  Value ret;
  bool aborted = false;
  friend auto operator<=>(const Outcome&, const Outcome&) = default;
};

/// A sequential specification or ADT: per method, a relation from
/// (state, input) to a finite set of (state', output). An empty outcome set
/// means the call is outside the method's domain.
class SeqSpec {
 public:
  SeqSpec(std::string name, std::vector<MethodDecl> methods,
          std::shared_ptr<const StateDomain> domain)
      : name_(std::move(name)), methods_(std::move(methods)), domain_(std::move(domain)) {}
  virtual ~SeqSpec() = default;

  const std::string& name() const { return name_; }
  const std::vector<MethodDecl>& methods() const { return methods_; }
  const StateDomain& domain() const { return *domain_; }
  std::shared_ptr<const StateDomain> domain_ptr() const { return domain_; }

  /// Throws UsageError for undeclared methods.
  std::size_t method_index(std::string_view method) const;
  bool has_method(std::string_view method) const;

  virtual State initial_state() const = 0;
  virtual std::vector<Outcome> apply(std::size_t method, const State& s, const Value& in) const = 0;
  std::vector<Outcome> apply(std::string_view method, const State& s, const Value& in) const {
    return apply(method_index(method), s, in);
  }

 private:
  std::string name_;
  std::vector<MethodDecl> methods_;
  std::shared_ptr<const StateDomain> domain_;
};

struct AbstractionFunction {
  std::string name;
  std::function<State(const State&)> map;

  State operator()(const State& s) const { return map(s); }
};

/// Inverse map collected over the states an injectivity scan encountered.
struct InjectivityReport {
  std::map<State, State> inverse;
  std::vector<std::pair<State, State>> collisions;  // distinct states with equal image
  bool injective() const { return collisions.empty(); }
};

InjectivityReport scan_injectivity(const AbstractionFunction& af, std::span<const State> states);

/// Bijection between object method names and ADT method names.
class RenamingFunction {
 public:
  RenamingFunction() = default;
  /// Throws UsageError unless the pairs form a bijection.
  explicit RenamingFunction(std::vector<std::pair<std::string, std::string>> pairs);
  static RenamingFunction identity(const std::vector<MethodDecl>& methods);

  const std::string& apply(const std::string& object_method) const;
  const std::string& inverse(const std::string& adt_method) const;
  const std::map<std::string, std::string>& forward() const { return forward_; }

 private:
  std::map<std::string, std::string> forward_;
  std::map<std::string, std::string> backward_;
};

History rename_history(const History& h, const RenamingFunction& rf);

/// Final states reachable by threading `start` through the (method, arg, ret)
/// pairs of a complete sequential history; empty means the history is illegal.
std::set<State> legal_seq_outcomes(const SeqSpec& spec, const State& start, const History& h_seq);

/// Inputs offered to a method during enumeration-based checks.
std::vector<Value> inputs_for(const MethodDecl& m, std::span<const Value> alphabet);

struct RefinementCounterexample {
  State concrete;
  std::string method;  // abstract method name
  Value input;
  std::optional<Outcome> abstract_outcome;  // absent when the failure is a domain gap
  std::string reason;
};

struct RefinementVerdict {
  bool passed = true;
  std::size_t states_checked = 0;
  std::optional<RefinementCounterexample> counterexample;
};

/// Sequential-implementation check over a finite state sample. For each sampled
/// well-formed state and each abstract call inside the abstract domain, the
/// concrete method must be defined, and each concrete outcome must map (through
/// the abstraction function and its return value) onto an abstract outcome.
/// For deterministic specifications this is exactly "the abstract outcome is
/// produced by some concrete outcome".
RefinementVerdict is_sequential_implementation(const SeqSpec& model_spec, const SeqSpec& adt,
                                               const AbstractionFunction& af,
                                               const RenamingFunction& rf,
                                               std::span<const State> states,
                                               std::span<const Value> alphabet);

/// Every concrete (state, input) inside the concrete domain maps to an abstract
/// (state, input) inside the abstract domain.
RefinementVerdict check_domain_lifting(const SeqSpec& model_spec, const SeqSpec& adt,
                                       const AbstractionFunction& af, const RenamingFunction& rf,
                                       std::span<const State> states,
                                       std::span<const Value> alphabet);

std::string describe(const RefinementCounterexample& cx, const SeqSpec& model_spec,
                     const SeqSpec& adt);

}  // namespace slin
