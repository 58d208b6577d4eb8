#include <gtest/gtest.h>

#include <random>

#include "slin/history.hpp"
#include "slin/history_io.hpp"
#include "slin/oracle.hpp"
#include "slin/workloads.hpp"

using namespace slin;

namespace {

const Value a = Value::symbol("a");
const Value b = Value::symbol("b");

History hist(std::string_view text) { return parse_history(text); }

CandidateFn unit_only() {
  return [](const Event&) { return std::vector<Value>{Value::unit()}; };
}

}  // namespace

TEST(Value, RoundTripsBothSyntaxes) {
  EXPECT_EQ(to_string(Value::symbol("c")), "'c'");
  EXPECT_EQ(to_bare_string(Value::null()), "·");
  EXPECT_EQ(parse_value("'c'"), Value::symbol("c"));
  EXPECT_EQ(parse_value("c"), Value::symbol("c"));
  EXPECT_EQ(parse_value("·"), Value::null());
  EXPECT_EQ(parse_value("null"), Value::null());
  EXPECT_EQ(parse_value("EMPTY"), Value::empty());
  EXPECT_EQ(parse_value("-3"), Value::integer(-3));
  EXPECT_THROW(Value::symbol("toolongsym"), ParseError);
}

TEST(History, RejectsOrphanResponsesAndDuplicateIds) {
  EXPECT_THROW(History({make_return(1, 1, Value::unit())}), HistoryError);
  EXPECT_THROW(History({make_invoke(1, 1, "Dequeue", Value::unit()), make_invoke(2, 1, "Dequeue", Value::unit())}),
               HistoryError);
  EXPECT_THROW(History({make_invoke(1, 1, "Dequeue", Value::unit()), make_return(2, 1, Value::unit())}),
               HistoryError);
  EXPECT_THROW(History({Event{1, std::nullopt, Action{"x := 1"}}}), HistoryError);
  EXPECT_THROW(hist("t=1 op=1 ret unit\n"), ParseError);
}

TEST(History, WellFormednessNeedsAlternationPerThread) {
  EXPECT_TRUE(is_well_formed(hist("t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\n")));
  EXPECT_FALSE(is_well_formed(hist("t=1 op=1 inv Enqueue 'a'\nt=1 op=2 inv Enqueue 'b'\n")));
  EXPECT_TRUE(is_well_formed(hist("t=1 op=1 inv Enqueue 'a'\nt=2 op=2 inv Enqueue 'b'\n")));
}

TEST(History, SequentialAndComplete) {
  const auto h = hist("t=1 op=1 inv Enqueue 'a'\nt=2 op=2 inv Dequeue unit\nt=1 op=1 ret unit\n");
  EXPECT_FALSE(is_sequential(h));
  EXPECT_FALSE(is_complete(h));
  EXPECT_EQ(pending(h), std::set<OpId>{2});
  const auto s = hist("t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\nt=2 op=2 inv Dequeue unit\nt=2 op=2 ret 'a'\n");
  EXPECT_TRUE(is_sequential(s));
  EXPECT_TRUE(is_complete(s));
}

TEST(History, HappenedBeforeExample) {
  const auto h = hist(
      "t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\nt=2 op=2 inv Dequeue unit\n"
      "t=3 op=3 inv Enqueue 'b'\nt=2 op=2 ret 'a'\nt=3 op=3 ret unit\n");
  const OpOrder o = happened_before(h);
  EXPECT_TRUE(o.precedes(1, 2));
  EXPECT_TRUE(o.precedes(1, 3));
  EXPECT_FALSE(o.precedes(2, 3));
  EXPECT_FALSE(o.precedes(3, 2));
  EXPECT_EQ(o.pairs().size(), 2u);
}

TEST(HistoryProperty, HappenedBeforeIsAStrictPartialOrder) {
  for (std::uint32_t seed = 0; seed < 300; ++seed) {
    const History h = random_queue_history(6, seed);
    const OpOrder o = happened_before(h);
    const auto& ops = o.operations();
    for (OpId x : ops) {
      EXPECT_FALSE(o.precedes(x, x));
      for (OpId y : ops) {
        if (o.precedes(x, y)) {
          EXPECT_FALSE(o.precedes(y, x));
        }
        for (OpId z : ops) {
          if (o.precedes(x, y) && o.precedes(y, z)) {
            EXPECT_TRUE(o.precedes(x, z));
          }
        }
      }
    }
  }
}

TEST(Completions, CompleteHistoryHasExactlyItself) {
  const auto h = hist("t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\n");
  const auto cs = completions(h, unit_only());
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0], h);
}

TEST(Completions, OnePendingGivesTwo) {
  const auto h = hist("t=1 op=1 inv Enqueue 'a'\n");
  EXPECT_EQ(completions(h, unit_only()).size(), 2u);
}

TEST(Completions, TwoPendingGiveFive) {
  // Drop both; close either alone; close both in either order.
  const auto h = hist("t=1 op=1 inv Enqueue 'a'\nt=2 op=2 inv Enqueue 'b'\n");
  const auto cs = completions(h, unit_only());
  EXPECT_EQ(cs.size(), 5u);
  for (const auto& c : cs) EXPECT_TRUE(is_complete(c));
}

TEST(Completions, AbortedOperationsCountAsComplete) {
  const auto h = hist("t=1 op=1 inv Enqueue 'a'\nt=1 op=1 abort\n");
  EXPECT_EQ(completions(h, unit_only()).size(), 1u);
}

TEST(Completions, CandidatesMultiplyClosings) {
  const auto h = hist("t=1 op=1 inv Dequeue unit\n");
  EXPECT_EQ(completions(h, queue_candidates()).size(), 4u);
}

TEST(Linearizes, OverlappingOperationsMayBeReordered) {
  const auto h = hist(
      "t=1 op=1 inv Enqueue 'a'\nt=2 op=2 inv Enqueue 'b'\nt=1 op=1 ret unit\nt=2 op=2 ret unit\n");
  const auto s1 = hist("t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\nt=2 op=2 inv Enqueue 'b'\nt=2 op=2 ret unit\n");
  const auto s2 = hist("t=2 op=2 inv Enqueue 'b'\nt=2 op=2 ret unit\nt=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\n");
  EXPECT_TRUE(linearizes(h, s1));
  EXPECT_TRUE(linearizes(h, s2));
  EXPECT_EQ(brute_force_linearizations(h).size(), 2u);
}

TEST(Linearizes, RealTimeOrderMustBeKept) {
  const auto h = hist("t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\nt=2 op=2 inv Enqueue 'b'\nt=2 op=2 ret unit\n");
  const auto swapped =
      hist("t=2 op=2 inv Enqueue 'b'\nt=2 op=2 ret unit\nt=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\n");
  EXPECT_FALSE(linearizes(h, swapped));
  EXPECT_FALSE(linearizes_by_bijection(h, swapped));
  EXPECT_EQ(brute_force_linearizations(h).size(), 1u);
}

TEST(Linearizes, ThreadProjectionsMustMatch) {
  const auto h = hist("t=1 op=1 inv Enqueue 'a'\nt=1 op=1 ret unit\n");
  const auto other = hist("t=2 op=1 inv Enqueue 'a'\nt=2 op=1 ret unit\n");
  EXPECT_FALSE(linearizes(h, other));
  EXPECT_FALSE(linearizes_by_bijection(h, other));
}

TEST(LinearizesProperty, Reflexive) {
  for (std::uint32_t seed = 0; seed < 300; ++seed) {
    const History h = random_queue_history(6, seed);
    EXPECT_TRUE(linearizes(h, h)) << serialize_history(h);
  }
}

TEST(LinearizesProperty, AgreesWithBijectionOracle) {
  const auto triples = linearizable_triples(400, 99);
  std::mt19937 rng(5);
  for (const auto& t : triples) {
    EXPECT_EQ(linearizes(t.h1, t.h3), linearizes_by_bijection(t.h1, t.h3));
    EXPECT_EQ(linearizes(t.h3, t.h1), linearizes_by_bijection(t.h3, t.h1));
    // Unrelated pairs exercise the negative side.
    const History other = random_queue_history(6, static_cast<std::uint32_t>(rng()));
    EXPECT_EQ(linearizes(t.h1, other), linearizes_by_bijection(t.h1, other));
  }
}

TEST(LinearizesProperty, Transitive) {
  for (const auto& t : linearizable_triples(300, 3)) {
    ASSERT_TRUE(linearizes(t.h1, t.h2));
    ASSERT_TRUE(linearizes(t.h2, t.h3));
    EXPECT_TRUE(linearizes(t.h1, t.h3));
  }
}

TEST(LinearizesProperty, BruteForceResultsAreSequentialLinearizations) {
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    const History h = random_queue_history(5, seed);
    for_each_completion(h, queue_candidates(), [&](const History& c) {
      for (const auto& s : brute_force_linearizations(c)) {
        EXPECT_TRUE(is_sequential(s));
        EXPECT_TRUE(linearizes(c, s));
      }
      return true;
    });
  }
}

TEST(HistoryIo, RoundTrip) {
  const std::string text =
      "t=1 op=1 inv Enqueue 'a'\n"
      "t=2 op=2 inv Dequeue unit\n"
      "t=1 op=1 abort\n"
      "t=2 op=2 ret EMPTY\n";
  EXPECT_EQ(serialize_history(parse_history(text)), text);
}

TEST(HistoryIo, DirectivesAndErrors) {
  const auto f = parse_history_file("# init: [a]\n# plain comment\nt=1 op=1 inv Dequeue unit\n");
  EXPECT_EQ(f.directives.at("init"), "[a]");
  EXPECT_EQ(f.history.size(), 1u);
  EXPECT_THROW(parse_history("t=1 op=1 fly away\n"), ParseError);
  EXPECT_THROW(parse_history("op=1 inv Dequeue unit\n"), ParseError);
}

TEST(Workloads, QueueHistoryCountMatchesClosedForm) {
  // Per thread of k calls: 5^k complete sequences of 2k events, plus 3 * 5^(k-1)
  // with a pending last call; all interleavings of the two event streams.
  std::size_t n = 0;
  for_each_queue_history(3, [&](const History& h) {
    EXPECT_TRUE(is_well_formed(h));
    ++n;
    return true;
  });
  EXPECT_EQ(n, 7115u);
}
