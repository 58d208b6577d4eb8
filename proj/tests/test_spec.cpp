#include <gtest/gtest.h>

#include "slin/history_io.hpp"
#include "slin/models.hpp"
#include "slin/registry.hpp"

using namespace slin;

namespace {

const Value a = Value::symbol("a");
const Value b = Value::symbol("b");
const Value c = Value::symbol("c");
const std::vector<Value> ab{a, b};

State parse(const SeqSpec& s, std::string_view text) { return s.domain().parse(text); }

std::vector<std::string> rendered(const SeqSpec& s, const std::vector<Outcome>& os) {
  std::vector<std::string> out;
  for (const auto& o : os) {
    out.push_back(o.aborted ? "abort" : s.domain().render(o.state) + " -> " + to_string(o.ret));
  }
  return out;
}

}  // namespace

TEST(QueueAdt, FifoAndEmpty) {
  const auto q = adt_queue();
  const State s0 = q->initial_state();
  EXPECT_EQ(q->domain().render(s0), "[]");
  const auto deq = q->apply("Dequeue", s0, Value::unit());
  EXPECT_EQ(rendered(*q, deq), std::vector<std::string>{"[] -> EMPTY"});
  const auto enq = q->apply("Enqueue", parse(*q, "[a]"), b);
  EXPECT_EQ(rendered(*q, enq), std::vector<std::string>{"[a,b] -> unit"});
  EXPECT_EQ(rendered(*q, q->apply("Dequeue", parse(*q, "[a,b]"), Value::unit())),
            std::vector<std::string>{"[b] -> 'a'"});
}

TEST(MultisetAdt, RemoveIsNondeterministic) {
  const auto m = adt_multiset();
  EXPECT_EQ(rendered(*m, m->apply("Remove", parse(*m, "{a,a,b}"), Value::unit())),
            (std::vector<std::string>{"{a,b} -> 'a'", "{a,a} -> 'b'"}));
  EXPECT_EQ(rendered(*m, m->apply("Remove", m->initial_state(), Value::unit())),
            std::vector<std::string>{"{} -> EMPTY"});
  EXPECT_EQ(rendered(*m, m->apply("Add", parse(*m, "{b}"), a)), std::vector<std::string>{"{a,b} -> unit"});
}

TEST(PseudoQueueAdt, DummyHeadIsKept) {
  const auto p = adt_pseudo_queue();
  EXPECT_EQ(p->domain().render(p->initial_state()), "[·]");
  EXPECT_EQ(rendered(*p, p->apply("Dequeue", parse(*p, "[·]"), Value::unit())),
            std::vector<std::string>{"[·] -> EMPTY"});
  EXPECT_EQ(rendered(*p, p->apply("Dequeue", parse(*p, "[x,a,b]"), Value::unit())),
            std::vector<std::string>{"[a,b] -> 'a'"});
  EXPECT_EQ(rendered(*p, p->apply("Enqueue", parse(*p, "[x]"), a)), std::vector<std::string>{"[x,a] -> unit"});
}

TEST(HwQueueSeq, EnqueueThenDequeue) {
  const auto s = hw_queue_seq(4);
  const State s0 = s->initial_state();
  EXPECT_EQ(s->domain().render(s0), "back=1 items=[·,·,·,·]");
  const auto e = s->apply("Enqueue", s0, c);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(s->domain().render(e[0].state), "back=2 items=[c,·,·,·]");
  const auto d = s->apply("Dequeue", e[0].state, Value::unit());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].ret, c);
  EXPECT_EQ(s->domain().render(d[0].state), "back=2 items=[·,·,·,·]");
}

TEST(HwQueueSeq, DequeueIsPartialOnEmptyAndEnqueueAbortsWhenFull) {
  const auto s = hw_queue_seq(2);
  EXPECT_TRUE(s->apply("Dequeue", s->initial_state(), Value::unit()).empty());
  const auto full = parse(*s, "back=3 items=[a,b]");
  const auto e = s->apply("Enqueue", full, c);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_TRUE(e[0].aborted);
}

TEST(HwQueueSeq, DequeueSkipsNullCells) {
  const auto s = hw_queue_seq(4);
  const auto d = s->apply("Dequeue", parse(*s, "back=3 items=[·,d,·,·]"), Value::unit());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].ret, Value::symbol("d"));
}

TEST(MsQueueSeq, FreshDequeueIsEmptyAndFifo) {
  const auto s = ms_queue_seq(4);
  const State s0 = s->initial_state();
  EXPECT_EQ(s->domain().render(s0), "head=n0 list=[n0:·] tail=n0");
  EXPECT_EQ(s->apply("Dequeue", s0, Value::unit())[0].ret, Value::empty());
  const auto e1 = s->apply("Enqueue", s0, Value::integer(1));
  const auto d = s->apply("Dequeue", e1[0].state, Value::unit());
  EXPECT_EQ(d[0].ret, Value::integer(1));
}

TEST(MsQueueSeq, AbortsWithoutAFreeNode) {
  const auto s = ms_queue_seq(2);
  const auto e1 = s->apply("Enqueue", s->initial_state(), a);
  ASSERT_FALSE(e1[0].aborted);
  const auto e2 = s->apply("Enqueue", e1[0].state, b);
  EXPECT_TRUE(e2[0].aborted);
}

TEST(LegalSeqOutcomes, ThreadsTheSpec) {
  const auto q = adt_queue();
  const auto legal = parse_history(
      "t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\nt=2 op=2 inv Dequeue unit\nt=2 op=2 ret 'a'\n");
  const auto finals = legal_seq_outcomes(*q, q->initial_state(), legal);
  ASSERT_EQ(finals.size(), 1u);
  EXPECT_EQ(q->domain().render(*finals.begin()), "[]");
  const auto illegal = parse_history("t=2 op=2 inv Dequeue unit\nt=2 op=2 ret 'a'\n");
  EXPECT_TRUE(legal_seq_outcomes(*q, q->initial_state(), illegal).empty());
}

TEST(LegalSeqOutcomes, NondeterminismKeepsEveryFinal) {
  const auto m = adt_multiset();
  const auto h = parse_history("t=1 op=1 inv Add 'a'\nt=1 op=1 ret unit\n");
  EXPECT_EQ(legal_seq_outcomes(*m, parse(*m, "{b}"), h).size(), 1u);
}

TEST(Renaming, MustBeABijection) {
  EXPECT_THROW(RenamingFunction({{"Enqueue", "Add"}, {"Dequeue", "Add"}}), UsageError);
  const RenamingFunction rf({{"Enqueue", "Add"}, {"Dequeue", "Remove"}});
  EXPECT_EQ(rf.apply("Enqueue"), "Add");
  EXPECT_EQ(rf.inverse("Remove"), "Dequeue");
  const auto h = rename_history(parse_history("t=1 op=1 inv Enqueue 'a'\n"), rf);
  EXPECT_EQ(std::get<Invoke>(h[0].label).method, "Add");
}

TEST(Refinement, MsQueueImplementsQueueMultisetAndPseudoQueue) {
  const auto ms = ms_queue_seq(4);
  const auto states = ms->domain().enumerate(ab);
  EXPECT_EQ(states.size(), 21u);
  const auto q = adt_queue();
  const auto m = adt_multiset();
  const auto p = adt_pseudo_queue();
  EXPECT_TRUE(is_sequential_implementation(*ms, *q, af_queue(), default_renaming(*ms, *q), states, ab).passed);
  EXPECT_TRUE(is_sequential_implementation(*ms, *m, af_multiset(), default_renaming(*ms, *m), states, ab).passed);
  EXPECT_TRUE(is_sequential_implementation(*ms, *p, af_pseudo(), default_renaming(*ms, *p), states, ab).passed);
}

TEST(Refinement, HwQueueMissesTheEmptyDequeue) {
  // The abstract queue answers EMPTY where the array queue has no answer.
  const auto hw = hw_queue_seq(4);
  const auto q = adt_queue();
  const auto v = is_sequential_implementation(*hw, *q, af_hw_queue(), default_renaming(*hw, *q),
                                              hw->domain().enumerate(ab), ab);
  ASSERT_FALSE(v.passed);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->method, "Dequeue");
  EXPECT_EQ(af_hw_queue()(v.counterexample->concrete), State{});
  // Every concrete step still lands inside the abstract domain.
  EXPECT_TRUE(check_domain_lifting(*hw, *q, af_hw_queue(), default_renaming(*hw, *q), hw->domain().enumerate(ab), ab)
                  .passed);
}

TEST(Refinement, ReportsMismatchedOutcome) {
  // Reading the queue backwards breaks Dequeue.
  const auto ms = ms_queue_seq(4);
  const auto q = adt_queue();
  AbstractionFunction reversed{"reversed", [](const State& s) {
                                 State r = af_queue()(s);
                                 std::reverse(r.cells.begin(), r.cells.end());
                                 return r;
                               }};
  const auto v = is_sequential_implementation(*ms, *q, reversed, default_renaming(*ms, *q),
                                              ms->domain().enumerate(ab), ab);
  EXPECT_FALSE(v.passed);
}

TEST(AbstractionFunctions, DummyOnlyList) {
  const auto ms = ms_queue_seq(4);
  const State s = ms->domain().parse("head=n0 list=[n0:b] tail=n0");
  EXPECT_EQ(adt_queue()->domain().render(af_queue()(s)), "[]");
  EXPECT_EQ(adt_pseudo_queue()->domain().render(af_pseudo()(s)), "[b]");
  EXPECT_EQ(adt_multiset()->domain().render(af_multiset()(s)), "{}");
}

TEST(AbstractionFunctions, DummyValueSeparatesOnlyThePseudoQueue) {
  const auto ms = ms_queue_seq(4);
  const State s1 = ms->domain().parse("head=n0 list=[n0:·,n1:a,n2:b] tail=n2");
  const State s2 = ms->domain().parse("head=n0 list=[n0:b,n1:a,n2:b] tail=n2");
  EXPECT_EQ(adt_queue()->domain().render(af_queue()(s1)), "[a,b]");
  EXPECT_EQ(af_queue()(s1), af_queue()(s2));
  EXPECT_NE(af_pseudo()(s1), af_pseudo()(s2));
  EXPECT_EQ(adt_multiset()->domain().render(af_multiset()(s2)), "{a,b}");
}

TEST(AbstractionFunctions, PseudoIsInjectiveQueueIsNot) {
  const auto states = ms_queue_seq(4)->domain().enumerate(ab);
  EXPECT_TRUE(scan_injectivity(af_pseudo(), states).injective());
  EXPECT_FALSE(scan_injectivity(af_queue(), states).injective());
  EXPECT_FALSE(scan_injectivity(af_multiset(), states).injective());
}

TEST(AbstractionFunctions, RejectCyclicLists) {
  MSQueueState q = MSQueueState::fresh(3);
  q.nodes[0].next = 1;
  q.nodes[1].allocated = true;
  q.nodes[1].next = 0;
  EXPECT_THROW(af_queue()(q.encode()), DomainError);
  EXPECT_THROW(af_pseudo()(q.encode()), DomainError);
}

TEST(Registry, ResolvesNamesAndParameters) {
  EXPECT_EQ(make_model("hw-queue,N=2")->domain().render(make_model("hw-queue,N=2")->initial_state()),
            "back=1 items=[·,·]");
  EXPECT_EQ(make_model("ms-queue")->name(), "ms-queue");
  EXPECT_EQ(make_spec("adt-multiset")->name(), "adt-multiset");
  EXPECT_EQ(make_af("af-pseudo").name, "af-pseudo");
  EXPECT_THROW(make_model("no-such-model"), UsageError);
  EXPECT_THROW(make_model("hw-queue,N"), UsageError);
  EXPECT_THROW(make_spec("adt-stack"), UsageError);
  EXPECT_THROW(make_af("af-none"), UsageError);
  EXPECT_EQ(model_names().size(), 3u);
  EXPECT_EQ(spec_names().size(), 6u);
}

TEST(Registry, DefaultRenamingAndAbstraction) {
  const auto ms = ms_queue_seq(4);
  const auto rf = default_renaming(*ms, *adt_multiset());
  EXPECT_EQ(rf.apply("Enqueue"), "Add");
  EXPECT_EQ(default_renaming(*ms, *adt_queue()).apply("Dequeue"), "Dequeue");
  EXPECT_EQ(default_af(*ms, *adt_pseudo_queue()).name, "af-pseudo");
  EXPECT_EQ(default_af(*hw_queue_seq(4), *adt_queue()).name, "af-hw-queue");
}
