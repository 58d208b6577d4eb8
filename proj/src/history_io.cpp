#include "slin/history_io.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace slin {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::uint64_t parse_field(std::string_view token, std::string_view key, std::size_t line) {
  if (token.substr(0, key.size()) != key) {
    throw ParseError("expected '" + std::string(key) + "<int>', got '" + std::string(token) + "'",
                     line);
  }
  const auto digits = token.substr(key.size());
  std::uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ParseError("invalid number in '" + std::string(token) + "'", line);
  }
  return n;
}

Event parse_event(std::string_view line, std::size_t lineno) {
  const auto tok = split_ws(line);
  if (tok.size() < 3) throw ParseError("expected 't=<int> op=<int> <kind> ...'", lineno);
  const auto thread = static_cast<ThreadId>(parse_field(tok[0], "t=", lineno));
  const OpId op = parse_field(tok[1], "op=", lineno);
  const auto kind = tok[2];
  try {
    if (kind == "inv") {
      if (tok.size() < 4 || tok.size() > 5) throw ParseError("inv takes a method and a value", lineno);
      const Value arg = tok.size() == 5 ? parse_value(tok[4]) : Value::unit();
      return make_invoke(thread, op, std::string(tok[3]), arg);
    }
    if (kind == "ret") {
      if (tok.size() != 4) throw ParseError("ret takes exactly one value", lineno);
      return make_return(thread, op, parse_value(tok[3]));
    }
    if (kind == "abort") {
      if (tok.size() != 3) throw ParseError("abort takes no value", lineno);
      return make_abort(thread, op);
    }
  } catch (const ParseError& e) {
    if (e.line() != 0) throw;
    throw ParseError(e.what(), lineno);
  }
  throw ParseError("unknown event kind '" + std::string(kind) + "'", lineno);
}

}  // namespace

HistoryFile parse_history_file(std::string_view text) {
  HistoryFile file;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (line[first] == '#') {
      auto body = line.substr(first + 1);
      const auto colon = body.find(':');
      if (colon != std::string_view::npos) {
        auto key = split_ws(body.substr(0, colon));
        if (key.size() == 1) {
          auto value = body.substr(colon + 1);
          const auto b = value.find_first_not_of(" \t");
          const auto e = value.find_last_not_of(" \t\r");
          file.directives[std::string(key[0])] =
              b == std::string_view::npos ? "" : std::string(value.substr(b, e - b + 1));
        }
      }
      continue;
    }
    Event ev = parse_event(line, lineno);
    try {
      file.history.push_back(std::move(ev));
    } catch (const HistoryError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return file;
}

History parse_history(std::string_view text) { return parse_history_file(text).history; }

std::string serialize_history(const History& h) {
  std::string out;
  for (const auto& e : h.events()) {
    out += to_string(e);
    out += '\n';
  }
  return out;
}

std::string serialize_history_file(const HistoryFile& file) {
  std::string out;
  for (const auto& [key, value] : file.directives) out += "# " + key + ": " + value + "\n";
  return out + serialize_history(file.history);
}

}  // namespace slin
