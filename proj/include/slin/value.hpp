#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slin {

/// Raised when user-supplied text (histories, programs, state literals) is malformed.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Raised on misuse of an API: unknown method, unknown registry name, broken precondition.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueKind : std::uint8_t { Null, Empty, Unit, Int, Symbol };

/// Tagged scalar carried by method arguments, return values, object cells and
/// client variables. Symbols are short printable tokens packed into the payload,
/// which keeps Value trivially copyable and cheap to hash.
class Value {
 public:
  static constexpr std::size_t kMaxSymbolLength = 8;

  constexpr Value() = default;

  static constexpr Value null() { return Value(ValueKind::Null, 0); }
  static constexpr Value empty() { return Value(ValueKind::Empty, 0); }
  static constexpr Value unit() { return Value(ValueKind::Unit, 0); }
  static constexpr Value integer(std::int64_t v) {
    return Value(ValueKind::Int, static_cast<std::uint64_t>(v));
  }
  /// Throws ParseError unless `name` is 1..8 characters of [A-Za-z0-9_]
  /// starting with a letter or underscore.
  static Value symbol(std::string_view name);

  constexpr ValueKind kind() const { return kind_; }
  constexpr bool is_null() const { return kind_ == ValueKind::Null; }
  constexpr bool is_int() const { return kind_ == ValueKind::Int; }
  constexpr bool is_symbol() const { return kind_ == ValueKind::Symbol; }
  constexpr std::int64_t as_int() const { return static_cast<std::int64_t>(payload_); }
  std::string symbol_name() const;
  constexpr std::uint64_t raw_payload() const { return payload_; }

  friend constexpr bool operator==(const Value&, const Value&) = default;
  friend constexpr std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (a.kind_ == ValueKind::Int) return a.as_int() <=> b.as_int();
    return a.payload_ <=> b.payload_;
  }

 private:
  constexpr Value(ValueKind k, std::uint64_t p) : kind_(k), payload_(p) {}

  ValueKind kind_ = ValueKind::Null;
  std::uint64_t payload_ = 0;
};

/// History-file syntax: 5, 'c', null, EMPTY, unit.
std::string to_string(const Value& v);
/// State-rendering syntax: 5, c, ·, EMPTY, unit.
std::string to_bare_string(const Value& v);
/// Accepts both syntaxes (plus the keyword `null` in bare positions).
Value parse_value(std::string_view text);

std::size_t hash_value(const Value& v);

/// Hash mixing shared by the state and configuration hashers.
inline void hash_combine(std::size_t& seed, std::size_t h) {
  seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

/// An object or abstract state: a flat vector of cells whose layout is owned
/// by the StateDomain that produced it.
struct State {
  std::vector<Value> cells;

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State& a, const State& b) {
    return std::lexicographical_compare_three_way(a.cells.begin(), a.cells.end(),
                                                  b.cells.begin(), b.cells.end());
  }
};

std::size_t hash_value(const State& s);

}  // namespace slin

template <>
struct std::hash<slin::Value> {
  std::size_t operator()(const slin::Value& v) const noexcept { return slin::hash_value(v); }
};

template <>
struct std::hash<slin::State> {
  std::size_t operator()(const slin::State& s) const noexcept { return slin::hash_value(s); }
};
