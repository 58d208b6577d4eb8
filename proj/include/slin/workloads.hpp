#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "slin/history.hpp"
#include "slin/program.hpp"

namespace slin {

/// Every well-formed two-thread queue history with at most `max_ops`
/// operations over the symbols {a, b}. Each thread runs a sequence of
/// Enqueue(a), Enqueue(b) and Dequeue() calls; dequeues return a, b or EMPTY;
/// the last call of a thread may stay pending. All interleavings of the two
/// threads' events are produced. Operation ids follow invocation order.
/// The visitor returns false to stop.
void for_each_queue_history(std::size_t max_ops, const std::function<bool(const History&)>& visit);

/// Completion candidates matching the generator: unit for Enqueue, a, b or
/// EMPTY for Dequeue.
CandidateFn queue_candidates();

/// h1 ⊑ h2 ⊑ h3 by construction: each step applies random adjacent swaps of
/// events from different threads, never moving an invocation before a
/// response that preceded it.
struct HistoryTriple {
  History h1;
  History h2;
  History h3;
};
std::vector<HistoryTriple> linearizable_triples(std::size_t count, std::uint32_t seed);

/// Random well-formed history of 2 to 4 threads and up to `max_ops` queue
/// operations; some trailing invocations stay pending.
History random_queue_history(std::size_t max_ops, std::uint32_t seed);

/// Program text with one thread per entry; each entry lists the calls of that
/// thread, e.g. {"E:a", "D"}.
std::string queue_program_text(const std::vector<std::vector<std::string>>& threads);

/// Two threads of two calls each over {a, b}, skipping programs that enqueue
/// four times (they exhaust a four-node store). Ordered pairs, 65 programs.
std::vector<std::vector<std::vector<std::string>>> two_by_two_workloads();

/// Random queue programs of 2 or 3 threads with 1 or 2 calls each.
std::vector<std::vector<std::vector<std::string>>> random_workloads(std::size_t count,
                                                                    std::uint32_t seed);

}  // namespace slin
