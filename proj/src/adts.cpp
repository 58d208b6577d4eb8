#include <algorithm>

#include "slin/models.hpp"

namespace slin {
namespace {

class QueueADT final : public SeqSpec {
 public:
  QueueADT()
      : SeqSpec("adt-queue", {{"Enqueue", true}, {"Dequeue", false}},
                std::make_shared<SequenceDomain>(0, SequenceDomain::Sample{0, 3, false})) {}

  State initial_state() const override { return State{}; }

  std::vector<Outcome> apply(std::size_t method, const State& s, const Value& in) const override {
    if (method == 0) {
      State next = s;
      next.cells.push_back(in);
      return {Outcome{std::move(next), Value::unit(), false}};
    }
    if (s.cells.empty()) return {Outcome{s, Value::empty(), false}};
    return {Outcome{State{{s.cells.begin() + 1, s.cells.end()}}, s.cells.front(), false}};
  }
};

// Remove on the empty multiset returns EMPTY so the object's empty Dequeue
// has an abstract counterpart.
class MultisetADT final : public SeqSpec {
 public:
  MultisetADT()
      : SeqSpec("adt-multiset", {{"Add", true}, {"Remove", false}},
                std::make_shared<MultisetDomain>()) {}

  State initial_state() const override { return State{}; }

  std::vector<Outcome> apply(std::size_t method, const State& s, const Value& in) const override {
    if (method == 0) {
      State next = s;
      next.cells.insert(std::upper_bound(next.cells.begin(), next.cells.end(), in), in);
      return {Outcome{std::move(next), Value::unit(), false}};
    }
    if (s.cells.empty()) return {Outcome{s, Value::empty(), false}};
    std::vector<Outcome> out;
    for (std::size_t i = 0; i < s.cells.size(); ++i) {
      if (i > 0 && s.cells[i] == s.cells[i - 1]) continue;
      State next = s;
      next.cells.erase(next.cells.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(Outcome{std::move(next), s.cells[i], false});
    }
    return out;
  }
};

// The first element is a sentinel that is never handed out. Dequeue removes
// the sentinel and returns the element behind it, which becomes the new
// sentinel.
class PseudoQueueADT final : public SeqSpec {
 public:
  PseudoQueueADT()
      : SeqSpec("adt-pseudo-queue", {{"Enqueue", true}, {"Dequeue", false}},
                std::make_shared<SequenceDomain>(0, SequenceDomain::Sample{1, 3, true})) {}

  State initial_state() const override { return State{{Value::null()}}; }

  std::vector<Outcome> apply(std::size_t method, const State& s, const Value& in) const override {
    if (method == 0) {
      State next = s;
      next.cells.push_back(in);
      return {Outcome{std::move(next), Value::unit(), false}};
    }
    if (s.cells.empty()) return {};
    if (s.cells.size() == 1) return {Outcome{s, Value::empty(), false}};
    return {Outcome{State{{s.cells.begin() + 1, s.cells.end()}}, s.cells[1], false}};
  }
};

}  // namespace

std::shared_ptr<const SeqSpec> adt_queue() { return std::make_shared<QueueADT>(); }
std::shared_ptr<const SeqSpec> adt_multiset() { return std::make_shared<MultisetADT>(); }
std::shared_ptr<const SeqSpec> adt_pseudo_queue() { return std::make_shared<PseudoQueueADT>(); }

AbstractionFunction af_identity() {
  return {"af-identity", [](const State& s) { return s; }};
}

}  // namespace slin
