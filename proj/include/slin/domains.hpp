#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "slin/spec.hpp"

namespace slin {

/// Herlihy-Wing queue state: `back` is the next free slot, items are 1-based.
struct HWQueueState {
  std::int64_t back = 1;
  std::vector<Value> items;  // items[0] is slot 1

  static HWQueueState fresh(std::size_t n);
  static HWQueueState decode(const State& s);
  State encode() const;
  std::size_t capacity() const { return items.size(); }
};

class HWQueueDomain final : public StateDomain {
 public:
  explicit HWQueueDomain(std::size_t n) : n_(n) {}
  std::size_t capacity() const { return n_; }

  std::string render(const State& s) const override;
  State parse(std::string_view text) const override;
  bool is_well_formed(const State& s) const override;
  std::optional<Value> read_cell(const State& s, std::string_view addr) const override;
  std::optional<State> write_cell(const State& s, std::string_view addr,
                                  const Value& v) const override;
  /// States with back <= N (room for one more Enqueue) whose cells at or
  /// beyond `back` are null.
  std::vector<State> enumerate(std::span<const Value> alphabet) const override;

 private:
  std::size_t n_;
};

/// Michael-Scott queue state over a bounded node store. Node references are
/// indices; `next` is nullopt for null.
struct MSQueueState {
  struct Node {
    Value value;
    std::optional<std::size_t> next;
    bool allocated = false;
    friend bool operator==(const Node&, const Node&) = default;
  };
  std::vector<Node> nodes;
  std::size_t head = 0;
  std::size_t tail = 0;

  /// Dummy-only list in node 0 with a null dummy value.
  static MSQueueState fresh(std::size_t pool);
  static MSQueueState decode(const State& s);
  State encode() const;

  /// Node ids reachable from head; nullopt if the list cycles or leaves the store.
  std::optional<std::vector<std::size_t>> list() const;
  /// Lowest unallocated node id.
  std::optional<std::size_t> free_node() const;
};

class MSQueueDomain final : public StateDomain {
 public:
  explicit MSQueueDomain(std::size_t pool) : pool_(pool) {}
  std::size_t pool() const { return pool_; }

  std::string render(const State& s) const override;
  State parse(std::string_view text) const override;
  /// Acyclic list from head, all list nodes allocated, tail is the last node.
  bool is_well_formed(const State& s) const override;
  State canonical(const State& s) const override;
  /// Canonical lists of 1..P-1 nodes: dummy value null or from the alphabet,
  /// payload values from the alphabet.
  std::vector<State> enumerate(std::span<const Value> alphabet) const override;

 private:
  std::size_t pool_;
};

/// Sequences, rendered `[a,b]`. capacity 0 means unbounded.
class SequenceDomain final : public StateDomain {
 public:
  struct Sample {
    std::size_t min_length = 0;
    std::size_t max_length = 3;
    bool null_head = false;  // first element may also be null (pseudo-queue dummy)
  };
  SequenceDomain(std::size_t capacity, Sample sample) : capacity_(capacity), sample_(sample) {}
  std::size_t capacity() const { return capacity_; }

  std::string render(const State& s) const override;
  State parse(std::string_view text) const override;
  bool is_well_formed(const State& s) const override;
  std::vector<State> enumerate(std::span<const Value> alphabet) const override;

 private:
  std::size_t capacity_;
  Sample sample_;
};

/// Multisets as sorted sequences, rendered `{a,b}`.
class MultisetDomain final : public StateDomain {
 public:
  std::string render(const State& s) const override;
  State parse(std::string_view text) const override;
  bool is_well_formed(const State& s) const override;
  std::vector<State> enumerate(std::span<const Value> alphabet) const override;
};

/// Splits "[a,b]" / "{a,b}" bodies into value tokens.
std::vector<Value> parse_value_list(std::string_view text, char open, char close);

}  // namespace slin
