// Bounded FIFO whose methods each complete in a single atomic step.

#include "slin/models.hpp"

namespace slin {
namespace {

constexpr std::size_t kEnqueue = 0;

const std::vector<MethodDecl>& queue_methods() {
  static const std::vector<MethodDecl> methods{{"Enqueue", true}, {"Dequeue", false}};
  return methods;
}

std::vector<Outcome> bounded_queue_apply(std::size_t capacity, std::size_t method, const State& s,
                                         const Value& in) {
  if (method == kEnqueue) {
    if (s.cells.size() >= capacity) return {Outcome{s, Value::unit(), true}};
    State next = s;
    next.cells.push_back(in);
    return {Outcome{std::move(next), Value::unit(), false}};
  }
  if (s.cells.empty()) return {Outcome{s, Value::empty(), false}};
  State next{std::vector<Value>(s.cells.begin() + 1, s.cells.end())};
  return {Outcome{std::move(next), s.cells.front(), false}};
}

class CoarseQueueSeq final : public SeqSpec {
 public:
  explicit CoarseQueueSeq(std::size_t capacity)
      : SeqSpec("coarse-queue-seq", queue_methods(),
                std::make_shared<SequenceDomain>(capacity, SequenceDomain::Sample{0, 3, false})),
        capacity_(capacity) {}

  State initial_state() const override { return State{}; }

  std::vector<Outcome> apply(std::size_t method, const State& s, const Value& in) const override {
    return bounded_queue_apply(capacity_, method, s, in);
  }

 private:
  std::size_t capacity_;
};

// Registers: [v]. The single step performs the whole method and returns.
class CoarseQueueModel final : public ObjectModel {
 public:
  explicit CoarseQueueModel(std::size_t capacity)
      : ObjectModel("coarse-queue", std::make_shared<CoarseQueueSeq>(capacity)), capacity_(capacity) {}

  State initial_state() const override { return State{}; }

  LocalState begin(std::size_t method, const Value& arg) const override {
    LocalState l;
    l.method = static_cast<std::uint8_t>(method);
    l.regs[0] = arg;
    return l;
  }

  std::vector<Step> step(const State& shared, const LocalState& local) const override {
    const auto outcome = bounded_queue_apply(capacity_, local.method, shared, local.regs[0]).front();
    Step st{local, std::nullopt, std::nullopt, false, {}};
    if (outcome.aborted) {
      st.action = "lock; Enqueue overflow";
      st.abort = true;
      return {st};
    }
    if (outcome.state != shared) st.shared = outcome.state;
    st.ret = outcome.ret;
    return {st};
  }

 private:
  std::size_t capacity_;
};

}  // namespace

std::shared_ptr<const SeqSpec> coarse_queue_seq(std::size_t capacity) {
  if (capacity < 1) throw UsageError("coarse-queue-seq needs C >= 1");
  return std::make_shared<CoarseQueueSeq>(capacity);
}

std::shared_ptr<const ObjectModel> coarse_queue_model(std::size_t capacity) {
  if (capacity < 1) throw UsageError("coarse-queue needs C >= 1");
  return std::make_shared<CoarseQueueModel>(capacity);
}

}  // namespace slin
