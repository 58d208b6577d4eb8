// Michael-Scott lock-free queue over a bounded node store.
//
// One step per source line. A line that reads shared memory and then branches
// on purely local data (`if (t = Tail)` followed by `if (tn = null)`) is a
// single step. Node initialisation after allocation touches only the fresh,
// unpublished node and is part of the allocation step. The Dequeue head update
// uses `hn`, the node read three lines earlier.

#include <algorithm>

#include "slin/models.hpp"

namespace slin {
namespace {

constexpr std::size_t kEnqueue = 0;
constexpr std::size_t kDequeue = 1;

const std::vector<MethodDecl>& ms_methods() {
  static const std::vector<MethodDecl> methods{{"Enqueue", true}, {"Dequeue", false}};
  return methods;
}

Value ref(std::size_t id) { return Value::integer(static_cast<std::int64_t>(id)); }
std::size_t deref(const Value& v) { return static_cast<std::size_t>(v.as_int()); }

class MSQueueSeq final : public SeqSpec {
 public:
  explicit MSQueueSeq(std::size_t pool)
      : SeqSpec("ms-queue-seq", ms_methods(), std::make_shared<MSQueueDomain>(pool)), pool_(pool) {}

  State initial_state() const override { return MSQueueState::fresh(pool_).encode(); }

  std::vector<Outcome> apply(std::size_t method, const State& s, const Value& in) const override {
    const State c = domain().canonical(s);
    auto q = MSQueueState::decode(c);
    const auto lst = q.list();
    if (!lst) return {};
    if (method == kEnqueue) {
      const auto n = q.free_node();
      if (!n) return {Outcome{c, Value::unit(), true}};
      q.nodes[*n] = {in, std::nullopt, true};
      q.nodes[q.tail].next = *n;
      q.tail = *n;
      return {Outcome{domain().canonical(q.encode()), Value::unit(), false}};
    }
    if (lst->size() == 1) return {Outcome{c, Value::empty(), false}};
    const std::size_t hn = (*lst)[1];
    const Value ret = q.nodes[hn].value;
    q.head = hn;
    return {Outcome{domain().canonical(q.encode()), ret, false}};
  }

 private:
  std::size_t pool_;
};

// Registers: Enqueue [v, n, t, tn]; Dequeue [-, h, t, hn, ret].
class MSModel final : public ObjectModel {
 public:
  explicit MSModel(std::size_t pool)
      : ObjectModel("ms-queue", std::make_shared<MSQueueSeq>(pool)), pool_(pool) {}

  State initial_state() const override { return MSQueueState::fresh(pool_).encode(); }

  LocalState begin(std::size_t method, const Value& arg) const override {
    LocalState l;
    l.method = static_cast<std::uint8_t>(method);
    l.regs[0] = method == kEnqueue ? arg : Value::unit();
    return l;
  }

  std::vector<Step> step(const State& shared, const LocalState& local) const override {
    auto q = MSQueueState::decode(shared);
    return {local.method == kEnqueue ? enqueue(q, local) : dequeue(q, local)};
  }

 private:
  static Step make(const LocalState& l, std::uint8_t pc, std::string_view action) {
    Step st{l, std::nullopt, std::nullopt, false, action};
    st.local.pc = pc;
    return st;
  }

  // Back to the top of the loop at `pc`, clearing registers from `first` on.
  static LocalState retry(const LocalState& l, std::uint8_t pc, std::size_t first) {
    LocalState r = l;
    r.pc = pc;
    for (std::size_t k = first; k < r.regs.size(); ++k) r.regs[k] = Value{};
    return r;
  }

  Step enqueue(MSQueueState& q, const LocalState& l) const {
    switch (l.pc) {
      case 0: {
        auto st = make(l, 1, "E1 n:=new_node(); n.value:=v; n.next:=null");
        const auto n = q.free_node();
        if (!n) {
          st.abort = true;
          return st;
        }
        q.nodes[*n] = {l.regs[0], std::nullopt, true};
        st.shared = q.encode();
        st.local.regs[1] = ref(*n);
        return st;
      }
      case 1: {
        auto st = make(l, 2, "E2 t:=Tail");
        st.local.regs[2] = ref(q.tail);
        return st;
      }
      case 2: {
        auto st = make(l, 3, "E3 tn:=t.next");
        const auto& next = q.nodes[deref(l.regs[2])].next;
        st.local.regs[3] = next ? ref(*next) : Value::null();
        return st;
      }
      case 3: {
        auto st = make(l, 0, "E4 if (t = Tail)");
        if (q.tail != deref(l.regs[2])) {
          st.local = retry(l, 1, 2);
        } else {
          st.local.pc = l.regs[3].is_null() ? 4 : 5;
        }
        return st;
      }
      case 4: {
        auto st = make(l, 6, "E5 cas(t.next, tn, n)");
        auto& tnode = q.nodes[deref(l.regs[2])];
        if (!tnode.next) {
          tnode.next = deref(l.regs[1]);
          st.shared = q.encode();
        } else {
          st.local = retry(l, 1, 2);
        }
        return st;
      }
      case 5: {
        auto st = make(l, 0, "E6 cas(Tail, t, tn)");
        if (q.tail == deref(l.regs[2])) {
          q.tail = deref(l.regs[3]);
          st.shared = q.encode();
        }
        st.local = retry(l, 1, 2);
        return st;
      }
      case 6: {
        auto st = make(l, 7, "E7 cas(Tail, t, n)");
        if (q.tail == deref(l.regs[2])) {
          q.tail = deref(l.regs[1]);
          st.shared = q.encode();
        }
        return st;
      }
      default: {
        auto st = make(l, l.pc, {});
        st.ret = Value::unit();
        return st;
      }
    }
  }

  Step dequeue(MSQueueState& q, const LocalState& l) const {
    switch (l.pc) {
      case 0: {
        auto st = make(l, 1, "D1 h:=Head");
        st.local.regs[1] = ref(q.head);
        return st;
      }
      case 1: {
        auto st = make(l, 2, "D2 t:=Tail");
        st.local.regs[2] = ref(q.tail);
        return st;
      }
      case 2: {
        auto st = make(l, 3, "D3 hn:=h.next");
        const auto& next = q.nodes[deref(l.regs[1])].next;
        st.local.regs[3] = next ? ref(*next) : Value::null();
        return st;
      }
      case 3: {
        auto st = make(l, 0, "D4 if (h = Head)");
        const bool empty_next = l.regs[3].is_null();
        if (q.head != deref(l.regs[1])) {
          st.local = retry(l, 0, 1);
        } else if (l.regs[1] == l.regs[2]) {
          st.local.pc = empty_next ? 4 : 5;
        } else if (empty_next) {
          st.local = retry(l, 0, 1);
        } else {
          st.local.pc = 6;
        }
        return st;
      }
      case 4: {
        auto st = make(l, l.pc, {});
        st.ret = Value::empty();
        return st;
      }
      case 5: {
        auto st = make(l, 0, "D5 cas(Tail, t, hn)");
        if (q.tail == deref(l.regs[2])) {
          q.tail = deref(l.regs[3]);
          st.shared = q.encode();
        }
        st.local = retry(l, 0, 1);
        return st;
      }
      case 6: {
        auto st = make(l, 7, "D6 ret:=hn.value");
        st.local.regs[4] = q.nodes[deref(l.regs[3])].value;
        return st;
      }
      case 7: {
        auto st = make(l, 8, "D7 cas(Head, h, hn)");
        if (q.head == deref(l.regs[1])) {
          q.head = deref(l.regs[3]);
          st.shared = q.encode();
        } else {
          st.local = retry(l, 0, 1);
        }
        return st;
      }
      default: {
        auto st = make(l, l.pc, {});
        st.ret = l.regs[4];
        return st;
      }
    }
  }

  std::size_t pool_;
};

// Values of the list from head, optionally skipping the dummy.
std::vector<Value> list_values(const State& s, bool include_dummy) {
  const auto q = MSQueueState::decode(s);
  const auto lst = q.list();
  if (!lst || lst->empty()) throw DomainError("abstraction applied to a cyclic or empty MS list");
  std::vector<Value> out;
  for (std::size_t i = include_dummy ? 0 : 1; i < lst->size(); ++i) out.push_back(q.nodes[(*lst)[i]].value);
  return out;
}

}  // namespace

std::shared_ptr<const SeqSpec> ms_queue_seq(std::size_t pool) {
  if (pool < 2) throw UsageError("ms-queue-seq needs P >= 2");
  return std::make_shared<MSQueueSeq>(pool);
}

std::shared_ptr<const ObjectModel> ms_model(std::size_t pool) {
  if (pool < 2) throw UsageError("ms-queue needs P >= 2");
  return std::make_shared<MSModel>(pool);
}

AbstractionFunction af_queue() {
  return {"af-queue", [](const State& s) { return State{list_values(s, false)}; }};
}

AbstractionFunction af_multiset() {
  return {"af-multiset", [](const State& s) {
            auto v = list_values(s, false);
            std::sort(v.begin(), v.end());
            return State{std::move(v)};
          }};
}

AbstractionFunction af_pseudo() {
  return {"af-pseudo", [](const State& s) { return State{list_values(s, true)}; }};
}

}  // namespace slin
