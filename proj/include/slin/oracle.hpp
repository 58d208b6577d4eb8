#pragma once

#include <optional>
#include <vector>

#include "slin/history.hpp"
#include "slin/spec.hpp"

namespace slin {

/// h ⊑ h_seq decided literally: per-thread projections equal, and a
/// backtracking search for a position bijection that maps every event to an
/// equal event and keeps each (response, later invocation) pair in order.
bool linearizes_by_bijection(const History& h, const History& h_seq);

/// Every complete sequential permutation of the complete history `h` that `h`
/// linearizes to, in lexicographic order of operation sequence. At most 7
/// operations (UsageError otherwise).
std::vector<History> brute_force_linearizations(const History& h);

/// Exhaustive legality: some completion of `h` (pending operations closed with
/// `candidates`) has a brute-force linearization that is a legal sequential
/// execution from `start`. Returns that witness.
std::optional<History> brute_force_legal_witness(const History& h, const SeqSpec& spec,
                                                 const State& start, const CandidateFn& candidates);

}  // namespace slin
