#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "slin/model.hpp"
#include "slin/spec.hpp"

namespace slin {

/// A registry reference such as `hw-queue,N=4`: a name plus integer parameters.
struct RegistryRef {
  std::string name;
  std::map<std::string, std::size_t> params;
};

/// Throws UsageError on malformed parameter lists.
RegistryRef parse_registry_ref(std::string_view text);

/// Models: hw-queue (N, default 4), ms-queue (P, default 4), coarse-queue (C, default 4).
std::shared_ptr<const ObjectModel> make_model(std::string_view ref);

/// Specifications and ADTs: hw-queue-seq, ms-queue-seq, coarse-queue-seq,
/// adt-queue, adt-multiset, adt-pseudo-queue.
std::shared_ptr<const SeqSpec> make_spec(std::string_view ref);

/// af-queue, af-multiset, af-pseudo, af-hw-queue, af-identity.
AbstractionFunction make_af(std::string_view name);

/// Identity when the method names coincide; Enqueue/Dequeue onto Add/Remove
/// for the multiset.
RenamingFunction default_renaming(const SeqSpec& object, const SeqSpec& adt);

/// Abstraction used when none is given: the object's own spec needs none,
/// the known ADT pairings get theirs.
AbstractionFunction default_af(const SeqSpec& object, const SeqSpec& adt);

std::vector<std::string> model_names();
std::vector<std::string> spec_names();
std::vector<std::string> af_names();

}  // namespace slin
