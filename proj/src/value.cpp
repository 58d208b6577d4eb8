#include "slin/value.hpp"

#include <cctype>
#include <charconv>

namespace slin {
namespace {

bool valid_symbol(std::string_view name) {
  if (name.empty() || name.size() > Value::kMaxSymbolLength) return false;
  const auto first = static_cast<unsigned char>(name.front());
  if (!std::isalpha(first) && first != '_') return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_') return false;
  }
  return true;
}

}  // namespace

Value Value::symbol(std::string_view name) {
  if (!valid_symbol(name)) throw ParseError("invalid symbol '" + std::string(name) + "'");
  // Big-endian packing so payload order is lexicographic order.
  std::uint64_t packed = 0;
  for (std::size_t i = 0; i < kMaxSymbolLength; ++i) {
    packed <<= 8;
    if (i < name.size()) packed |= static_cast<unsigned char>(name[i]);
  }
  return Value(ValueKind::Symbol, packed);
}

std::string Value::symbol_name() const {
  std::string out;
  for (std::size_t i = 0; i < kMaxSymbolLength; ++i) {
    const auto c = static_cast<char>((payload_ >> (8 * (kMaxSymbolLength - 1 - i))) & 0xff);
    if (c == '\0') break;
    out.push_back(c);
  }
  return out;
}

std::string to_string(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Null: return "null";
    case ValueKind::Empty: return "EMPTY";
    case ValueKind::Unit: return "unit";
    case ValueKind::Int: return std::to_string(v.as_int());
    case ValueKind::Symbol: return "'" + v.symbol_name() + "'";
  }
  return "?";
}

std::string to_bare_string(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Null: return "·";
    case ValueKind::Symbol: return v.symbol_name();
    default: return to_string(v);
  }
}

Value parse_value(std::string_view text) {
  if (text.empty()) throw ParseError("empty value");
  if (text == "null" || text == "·") return Value::null();
  if (text == "EMPTY") return Value::empty();
  if (text == "unit") return Value::unit();
  if (text.size() >= 2 && text.front() == '\'' && text.back() == '\'') {
    return Value::symbol(text.substr(1, text.size() - 2));
  }
  const char first = text.front();
  if (first == '-' || std::isdigit(static_cast<unsigned char>(first))) {
    std::int64_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ParseError("invalid integer '" + std::string(text) + "'");
    }
    return Value::integer(n);
  }
  return Value::symbol(text);
}

std::size_t hash_value(const Value& v) {
  std::size_t seed = static_cast<std::size_t>(v.kind());
  hash_combine(seed, std::hash<std::uint64_t>{}(v.raw_payload()));
  return seed;
}

std::size_t hash_value(const State& s) {
  std::size_t seed = s.cells.size();
  for (const auto& c : s.cells) hash_combine(seed, hash_value(c));
  return seed;
}

}  // namespace slin
