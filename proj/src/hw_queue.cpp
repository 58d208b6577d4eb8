// Herlihy-Wing queue over a bounded array.
//
//   Enqueue(v):  t := INC(back); items[t] := v
//   Dequeue():   loop { range := back-1;
//                       for i in 1..range { temp := swap(items[i], null);
//                                           if temp != null return temp } }
//
// Atomicity is one source line. Local-only bookkeeping (the `for` test, the
// `if temp != null` test) is folded into the step that precedes it.

#include "slin/models.hpp"

namespace slin {
namespace {

constexpr std::size_t kEnqueue = 0;
constexpr std::size_t kDequeue = 1;

const std::vector<MethodDecl>& hw_methods() {
  static const std::vector<MethodDecl> methods{{"Enqueue", true}, {"Dequeue", false}};
  return methods;
}

class HWQueueSeq final : public SeqSpec {
 public:
  explicit HWQueueSeq(std::size_t n)
      : SeqSpec("hw-queue-seq", hw_methods(), std::make_shared<HWQueueDomain>(n)), n_(n) {}

  State initial_state() const override { return HWQueueState::fresh(n_).encode(); }

  std::vector<Outcome> apply(std::size_t method, const State& s, const Value& in) const override {
    auto q = HWQueueState::decode(s);
    if (method == kEnqueue) {
      if (q.back > static_cast<std::int64_t>(n_)) return {Outcome{s, Value::unit(), true}};
      q.items[static_cast<std::size_t>(q.back - 1)] = in;
      ++q.back;
      return {Outcome{q.encode(), Value::unit(), false}};
    }
    // Dequeue is undefined when every cell below back is null; the
    // implementation spins there.
    for (std::int64_t i = 1; i < q.back; ++i) {
      auto& cell = q.items[static_cast<std::size_t>(i - 1)];
      if (!cell.is_null()) {
        const Value v = cell;
        cell = Value::null();
        return {Outcome{q.encode(), v, false}};
      }
    }
    return {};
  }

 private:
  std::size_t n_;
};

// Registers: Enqueue [v, t]; Dequeue [-, range, i, temp].
class HWModel final : public ObjectModel {
 public:
  explicit HWModel(std::size_t n)
      : ObjectModel("hw-queue", std::make_shared<HWQueueSeq>(n)), n_(n) {}

  State initial_state() const override { return HWQueueState::fresh(n_).encode(); }

  LocalState begin(std::size_t method, const Value& arg) const override {
    LocalState l;
    l.method = static_cast<std::uint8_t>(method);
    l.regs[0] = method == kEnqueue ? arg : Value::unit();
    return l;
  }

  std::vector<Step> step(const State& shared, const LocalState& local) const override {
    return local.method == kEnqueue ? enqueue(shared, local) : dequeue(shared, local);
  }

 private:
  std::vector<Step> enqueue(const State& shared, const LocalState& l) const {
    Step st{l, std::nullopt, std::nullopt, false, {}};
    switch (l.pc) {
      case 0: {
        const auto back = shared.cells[0].as_int();
        st.action = "L1 t:=INC(back)";
        if (back > static_cast<std::int64_t>(n_)) {
          st.abort = true;
          return {st};
        }
        State next = shared;
        next.cells[0] = Value::integer(back + 1);
        st.shared = std::move(next);
        st.local.regs[1] = Value::integer(back);
        st.local.pc = 1;
        return {st};
      }
      case 1: {
        State next = shared;
        next.cells[static_cast<std::size_t>(l.regs[1].as_int())] = l.regs[0];
        st.shared = std::move(next);
        st.action = "L2 items[t]:=v";
        st.local.pc = 2;
        return {st};
      }
      default:
        st.ret = Value::unit();
        return {st};
    }
  }

  std::vector<Step> dequeue(const State& shared, const LocalState& l) const {
    Step st{l, std::nullopt, std::nullopt, false, {}};
    const LocalState restart = begin(kDequeue, Value::unit());
    switch (l.pc) {
      case 0: {
        const auto range = shared.cells[0].as_int() - 1;
        st.action = "L6 range:=back-1";
        if (range < 1) {
          st.local = restart;
        } else {
          st.local.regs[1] = Value::integer(range);
          st.local.regs[2] = Value::integer(1);
          st.local.pc = 1;
        }
        return {st};
      }
      case 1: {
        const auto i = l.regs[2].as_int();
        const auto cell = static_cast<std::size_t>(i);
        const Value temp = shared.cells[cell];
        st.action = "L8 temp:=swap(items[i],null)";
        if (!temp.is_null()) {
          State next = shared;
          next.cells[cell] = Value::null();
          st.shared = std::move(next);
          st.local.regs[3] = temp;
          st.local.pc = 2;
        } else if (i + 1 > l.regs[1].as_int()) {
          st.local = restart;
        } else {
          st.local.regs[2] = Value::integer(i + 1);
        }
        return {st};
      }
      default:
        st.ret = l.regs[3];
        return {st};
    }
  }

  std::size_t n_;
};

}  // namespace

std::shared_ptr<const SeqSpec> hw_queue_seq(std::size_t n) {
  if (n < 1) throw UsageError("hw-queue-seq needs N >= 1");
  return std::make_shared<HWQueueSeq>(n);
}

std::shared_ptr<const ObjectModel> hw_model(std::size_t n) {
  if (n < 1) throw UsageError("hw-queue needs N >= 1");
  return std::make_shared<HWModel>(n);
}

AbstractionFunction af_hw_queue() {
  return {"af-hw-queue", [](const State& s) {
            const auto q = HWQueueState::decode(s);
            State out;
            for (const auto& v : q.items) {
              if (!v.is_null()) out.cells.push_back(v);
            }
            return out;
          }};
}

}  // namespace slin
