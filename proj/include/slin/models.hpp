#pragma once

#include <memory>

#include "slin/domains.hpp"
#include "slin/model.hpp"
#include "slin/spec.hpp"

namespace slin {

// Sequential specifications of the concrete objects.
std::shared_ptr<const SeqSpec> hw_queue_seq(std::size_t n);
std::shared_ptr<const SeqSpec> ms_queue_seq(std::size_t pool);
std::shared_ptr<const SeqSpec> coarse_queue_seq(std::size_t capacity);

// Abstract data types.
std::shared_ptr<const SeqSpec> adt_queue();
std::shared_ptr<const SeqSpec> adt_multiset();
std::shared_ptr<const SeqSpec> adt_pseudo_queue();

// Step machines.
std::shared_ptr<const ObjectModel> hw_model(std::size_t n);
std::shared_ptr<const ObjectModel> ms_model(std::size_t pool);
std::shared_ptr<const ObjectModel> coarse_queue_model(std::size_t capacity);

// Abstraction functions. The MS ones accept any state whose list from head is
// acyclic and throw DomainError otherwise.
AbstractionFunction af_queue();       // MS list after the dummy, as a sequence
AbstractionFunction af_multiset();    // MS list after the dummy, as a multiset
AbstractionFunction af_pseudo();      // MS list including the dummy value
AbstractionFunction af_hw_queue();    // non-null HW cells in index order
AbstractionFunction af_identity();

}  // namespace slin
