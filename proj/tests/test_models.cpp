#include <gtest/gtest.h>

#include "slin/models.hpp"
#include "slin/registry.hpp"

using namespace slin;

namespace {

const Value a = Value::symbol("a");
const Value b = Value::symbol("b");
const Value c = Value::symbol("c");
const std::vector<Value> ab{a, b};

std::size_t method(const ObjectModel& m, std::string_view name) { return m.sequential_spec().method_index(name); }

std::vector<std::string> outcomes(const ObjectModel& m, const IsolationResult& r) {
  std::vector<std::string> out;
  for (const auto& o : r.outcomes) out.push_back(o.aborted ? "abort" : m.domain().render(o.state) + " -> " + to_string(o.ret));
  return out;
}

}  // namespace

TEST(CompanionAgreement, HwQueue) {
  const auto m = hw_model(4);
  const auto states = m->domain().enumerate(ab);
  ASSERT_FALSE(states.empty());
  const auto mismatch = check_companion_agreement(*m, states, ab);
  EXPECT_FALSE(mismatch) << (mismatch ? mismatch->detail : "");
}

TEST(CompanionAgreement, MsQueue) {
  for (std::size_t pool : {2u, 3u, 4u}) {
    const auto m = ms_model(pool);
    const auto states = m->domain().enumerate(ab);
    const auto mismatch = check_companion_agreement(*m, states, ab);
    EXPECT_FALSE(mismatch) << pool << ": " << (mismatch ? mismatch->detail : "");
  }
}

TEST(CompanionAgreement, CoarseQueue) {
  const auto m = coarse_queue_model(3);
  const auto mismatch = check_companion_agreement(*m, m->domain().enumerate(ab), ab);
  EXPECT_FALSE(mismatch) << (mismatch ? mismatch->detail : "");
}

TEST(HwModel, EnqueueThenDequeueAlone) {
  const auto m = hw_model(4);
  const auto e = run_in_isolation(*m, m->initial_state(), method(*m, "Enqueue"), c);
  ASSERT_EQ(e.outcomes.size(), 1u);
  EXPECT_EQ(outcomes(*m, e), std::vector<std::string>{"back=2 items=[c,·,·,·] -> unit"});
  const auto d = run_in_isolation(*m, e.outcomes.begin()->state, method(*m, "Dequeue"), Value::unit());
  EXPECT_EQ(outcomes(*m, d), std::vector<std::string>{"back=2 items=[·,·,·,·] -> 'c'"});
}

TEST(HwModel, DequeueOnEmptySpinsWithoutWriting) {
  const auto m = hw_model(4);
  const auto d = run_in_isolation(*m, m->initial_state(), method(*m, "Dequeue"), Value::unit());
  EXPECT_TRUE(d.outcomes.empty());
  EXPECT_TRUE(d.diverges);
  EXPECT_FALSE(d.diverging_run_modifies_state);
  const auto after = run_in_isolation(*m, m->domain().parse("back=3 items=[·,·,·,·]"), method(*m, "Dequeue"),
                                      Value::unit());
  EXPECT_TRUE(after.diverges);
  EXPECT_FALSE(after.diverging_run_modifies_state);
}

TEST(HwModel, EnqueueAbortsPastTheArray) {
  const auto m = hw_model(2);
  const auto e = run_in_isolation(*m, m->domain().parse("back=3 items=[a,b]"), method(*m, "Enqueue"), c);
  EXPECT_EQ(outcomes(*m, e), std::vector<std::string>{"abort"});
}

TEST(HwModel, EnqueueTakesTwoSteps) {
  const auto m = hw_model(4);
  LocalState l = m->begin(method(*m, "Enqueue"), c);
  auto s1 = m->step(m->initial_state(), l);
  ASSERT_EQ(s1.size(), 1u);
  ASSERT_TRUE(s1[0].shared);
  EXPECT_EQ(m->domain().render(*s1[0].shared), "back=2 items=[·,·,·,·]");
  auto s2 = m->step(*s1[0].shared, s1[0].local);
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(m->domain().render(*s2[0].shared), "back=2 items=[c,·,·,·]");
  auto s3 = m->step(*s2[0].shared, s2[0].local);
  ASSERT_EQ(s3.size(), 1u);
  EXPECT_EQ(s3[0].ret, Value::unit());
  EXPECT_FALSE(s3[0].shared);
}

TEST(MsModel, FreshDequeueReturnsEmpty) {
  const auto m = ms_model(4);
  const auto d = run_in_isolation(*m, m->initial_state(), method(*m, "Dequeue"), Value::unit());
  EXPECT_EQ(outcomes(*m, d), std::vector<std::string>{"head=n0 list=[n0:·] tail=n0 -> EMPTY"});
}

TEST(MsModel, EnqueueThenDequeue) {
  const auto m = ms_model(4);
  const auto e = run_in_isolation(*m, m->initial_state(), method(*m, "Enqueue"), Value::integer(1));
  ASSERT_EQ(e.outcomes.size(), 1u);
  const auto d = run_in_isolation(*m, e.outcomes.begin()->state, method(*m, "Dequeue"), Value::unit());
  ASSERT_EQ(d.outcomes.size(), 1u);
  EXPECT_EQ(d.outcomes.begin()->ret, Value::integer(1));
}

TEST(MsModel, HelpsALaggingTail) {
  const auto m = ms_model(4);
  // Tail still points at the dummy although n1 is linked.
  MSQueueState q = MSQueueState::decode(m->domain().parse("head=n0 list=[n0:·,n1:a] tail=n1"));
  q.tail = 0;
  const State lagging = q.encode();
  EXPECT_FALSE(m->domain().is_well_formed(lagging));
  const auto e = run_in_isolation(*m, lagging, method(*m, "Enqueue"), b);
  EXPECT_EQ(outcomes(*m, e), std::vector<std::string>{"head=n0 list=[n0:·,n1:a,n2:b] tail=n2 -> unit"});
  const auto d = run_in_isolation(*m, lagging, method(*m, "Dequeue"), Value::unit());
  EXPECT_EQ(outcomes(*m, d), std::vector<std::string>{"head=n0 list=[n0:a] tail=n0 -> 'a'"});
}

TEST(MsModel, AbortsWhenTheStoreIsExhausted) {
  const auto m = ms_model(2);
  const auto e = run_in_isolation(*m, m->domain().parse("head=n0 list=[n0:·,n1:a] tail=n1"), method(*m, "Enqueue"), b);
  EXPECT_EQ(outcomes(*m, e), std::vector<std::string>{"abort"});
}

TEST(CoarseModel, SingleStepOperations) {
  const auto m = coarse_queue_model(2);
  LocalState l = m->begin(method(*m, "Enqueue"), a);
  const auto steps = m->step(m->initial_state(), l);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_TRUE(steps[0].shared);
  EXPECT_EQ(steps[0].ret, Value::unit());
  const auto full = run_in_isolation(*m, m->domain().parse("[a,b]"), method(*m, "Enqueue"), c);
  EXPECT_EQ(outcomes(*m, full), std::vector<std::string>{"abort"});
}

TEST(MsDomain, CanonicalRenamesNodesAndDropsGarbage) {
  const auto m = ms_model(4);
  const auto& d = m->domain();
  const State s = d.parse("head=n2 list=[n2:·,n0:a] tail=n0");
  EXPECT_EQ(d.render(d.canonical(s)), "head=n0 list=[n0:·,n1:a] tail=n1");
  EXPECT_TRUE(d.is_well_formed(s));
}

TEST(MsDomain, InjectivityScanOverEveryPoolSize) {
  for (std::size_t pool : {2u, 3u, 4u}) {
    const auto states = ms_model(pool)->domain().enumerate(ab);
    const auto r = scan_injectivity(af_pseudo(), states);
    EXPECT_TRUE(r.injective()) << pool;
    EXPECT_EQ(r.inverse.size(), states.size());
  }
}
