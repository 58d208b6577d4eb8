#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "slin/value.hpp"

namespace slin {

using ThreadId = std::uint32_t;
using OpId = std::uint64_t;

struct Invoke {
  std::string method;
  Value arg;
  friend auto operator<=>(const Invoke&, const Invoke&) = default;
};
struct Return {
  Value value;
  friend auto operator<=>(const Return&, const Return&) = default;
};
struct ReturnAbort {
  friend auto operator<=>(const ReturnAbort&, const ReturnAbort&) = default;
};
struct Action {
  std::string descriptor;
  friend auto operator<=>(const Action&, const Action&) = default;
};

using Label = std::variant<Invoke, Return, ReturnAbort, Action>;

/// One step of a trace. Invocations and responses always carry an operation
/// id; client actions never do; object-internal actions carry the id of the
/// operation whose body performed them.
struct Event {
  ThreadId thread = 0;
  std::optional<OpId> op;
  Label label;

  bool is_invoke() const { return std::holds_alternative<Invoke>(label); }
  bool is_response() const {
    return std::holds_alternative<Return>(label) || std::holds_alternative<ReturnAbort>(label);
  }
  bool is_action() const { return std::holds_alternative<Action>(label); }
  bool is_client() const { return is_action() && !op.has_value(); }

  friend auto operator<=>(const Event&, const Event&) = default;
};

std::size_t hash_value(const Event& e);
std::string to_string(const Event& e);

Event make_invoke(ThreadId t, OpId op, std::string method, Value arg);
Event make_return(ThreadId t, OpId op, Value value);
Event make_abort(ThreadId t, OpId op);

/// Raised when an event sequence violates the structural invariants of a
/// history (non-history labels, duplicate operation ids, orphan responses).
class HistoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sequence of invocation and response events. Construction validates the
/// structural invariants; well-formedness is a separate predicate.
class History {
 public:
  History() = default;
  explicit History(std::vector<Event> events);

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }

  /// Appends with the same validation as the constructor.
  void push_back(Event e);

  std::vector<ThreadId> threads() const;
  /// Operation ids in order of invocation.
  std::vector<OpId> operations() const;
  const Event& invocation_of(OpId op) const;
  const Event* response_of(OpId op) const;

  friend bool operator==(const History&, const History&) = default;
  friend auto operator<=>(const History& a, const History& b) {
    return std::lexicographical_compare_three_way(a.events_.begin(), a.events_.end(),
                                                  b.events_.begin(), b.events_.end());
  }

 private:
  std::vector<Event> events_;
};

History project_thread(const History& h, ThreadId t);
bool is_sequential(const History& h);
bool is_well_formed(const History& h);
/// Well-formed and every invocation has a matching response.
bool is_complete(const History& h);
std::set<OpId> pending(const History& h);

/// Strict partial order o <ₒ o': the response of o precedes the invocation of o'.
class OpOrder {
 public:
  OpOrder() = default;
  explicit OpOrder(const History& h);

  bool precedes(OpId a, OpId b) const;
  const std::vector<OpId>& operations() const { return ops_; }
  std::vector<std::pair<OpId, OpId>> pairs() const;
  /// Every pair of this order is also ordered in `other`.
  bool contained_in(const OpOrder& other) const;

 private:
  std::size_t index_of(OpId op) const;

  std::vector<OpId> ops_;
  std::vector<bool> matrix_;
};

OpOrder happened_before(const History& h);

/// Candidate return values offered when closing the pending invocation `inv`.
using CandidateFn = std::function<std::vector<Value>(const Event& inv)>;

/// Lazily enumerates Compl(h): each pending operation is either removed or closed
/// by a response appended at the end, over every append order and candidate value.
/// Operations already closed by an abort response count as complete. The visitor
/// returns false to stop the enumeration early.
void for_each_completion(const History& h, const CandidateFn& candidates,
                         const std::function<bool(const History&)>& visit);
std::vector<History> completions(const History& h, const CandidateFn& candidates);

/// h ⊑ h_seq using per-thread equality plus happened-before containment under
/// the canonical event correspondence.
bool linearizes(const History& h, const History& h_seq);

}  // namespace slin

template <>
struct std::hash<slin::Event> {
  std::size_t operator()(const slin::Event& e) const noexcept { return slin::hash_value(e); }
};
