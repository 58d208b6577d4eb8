#include "slin/domains.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

namespace slin {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string join_bare(const std::vector<Value>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += to_bare_string(values[i]);
  }
  return out;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t n = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return n;
}

std::string_view expect_key(std::string_view token, std::string_view key) {
  if (token.substr(0, key.size()) != key) {
    throw ParseError("expected '" + std::string(key) + "...', got '" + std::string(token) + "'");
  }
  return token.substr(key.size());
}

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    const auto start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::size_t parse_node_ref(std::string_view s) {
  if (s.empty() || s.front() != 'n') throw ParseError("expected node reference, got '" + std::string(s) + "'");
  return static_cast<std::size_t>(parse_int(s.substr(1), "node id"));
}

// Calls `emit` with every vector of length `len` over `choices`.
void for_each_tuple(std::span<const Value> choices, std::size_t len,
                    const std::function<void(const std::vector<Value>&)>& emit) {
  std::vector<Value> cur(len);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == len) {
      emit(cur);
      return;
    }
    for (const auto& c : choices) {
      cur[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
}

}  // namespace

std::vector<Value> parse_value_list(std::string_view text, char open, char close) {
  text = trim(text);
  if (text.size() < 2 || text.front() != open || text.back() != close) {
    throw ParseError("expected " + std::string(1, open) + "..." + std::string(1, close) + ", got '" +
                     std::string(text) + "'");
  }
  std::vector<Value> out;
  auto body = trim(text.substr(1, text.size() - 2));
  if (body.empty()) return out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = body.find(',', pos);
    const auto tok = trim(body.substr(pos, comma == std::string_view::npos ? body.size() - pos : comma - pos));
    out.push_back(parse_value(tok));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------- HW queue

HWQueueState HWQueueState::fresh(std::size_t n) {
  HWQueueState s;
  s.items.assign(n, Value::null());
  return s;
}

HWQueueState HWQueueState::decode(const State& s) {
  if (s.cells.empty() || !s.cells[0].is_int()) throw UsageError("not an HW queue state");
  HWQueueState out;
  out.back = s.cells[0].as_int();
  out.items.assign(s.cells.begin() + 1, s.cells.end());
  return out;
}

State HWQueueState::encode() const {
  State s;
  s.cells.reserve(items.size() + 1);
  s.cells.push_back(Value::integer(back));
  s.cells.insert(s.cells.end(), items.begin(), items.end());
  return s;
}

std::string HWQueueDomain::render(const State& s) const {
  const auto q = HWQueueState::decode(s);
  return "back=" + std::to_string(q.back) + " items=[" + join_bare(q.items) + "]";
}

State HWQueueDomain::parse(std::string_view text) const {
  const auto tok = split_ws(trim(text));
  if (tok.size() != 2) throw ParseError("expected 'back=<int> items=[...]'");
  HWQueueState q;
  q.back = parse_int(expect_key(tok[0], "back="), "back");
  q.items = parse_value_list(expect_key(tok[1], "items="), '[', ']');
  if (q.items.size() != n_) {
    throw ParseError("expected " + std::to_string(n_) + " items, got " + std::to_string(q.items.size()));
  }
  State s = q.encode();
  if (!is_well_formed(s)) throw ParseError("back out of range in '" + std::string(text) + "'");
  return s;
}

bool HWQueueDomain::is_well_formed(const State& s) const {
  if (s.cells.size() != n_ + 1 || !s.cells[0].is_int()) return false;
  const auto back = s.cells[0].as_int();
  return back >= 1 && back <= static_cast<std::int64_t>(n_) + 1;
}

namespace {

std::optional<std::size_t> item_index(std::string_view addr, std::size_t n) {
  if (addr.substr(0, 6) != "items[" || addr.back() != ']') return std::nullopt;
  const auto digits = addr.substr(6, addr.size() - 7);
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  if (idx < 1 || idx > n) return std::nullopt;
  return idx;
}

}  // namespace

std::optional<Value> HWQueueDomain::read_cell(const State& s, std::string_view addr) const {
  if (addr == "back") return s.cells[0];
  if (auto idx = item_index(addr, n_)) return s.cells[*idx];
  return std::nullopt;
}

std::optional<State> HWQueueDomain::write_cell(const State& s, std::string_view addr,
                                               const Value& v) const {
  auto idx = item_index(addr, n_);
  if (!idx) return std::nullopt;
  State out = s;
  out.cells[*idx] = v;
  return out;
}

std::vector<State> HWQueueDomain::enumerate(std::span<const Value> alphabet) const {
  std::vector<Value> choices{Value::null()};
  choices.insert(choices.end(), alphabet.begin(), alphabet.end());
  std::vector<State> out;
  for (std::size_t back = 1; back <= n_; ++back) {
    for_each_tuple(choices, back - 1, [&](const std::vector<Value>& prefix) {
      auto q = HWQueueState::fresh(n_);
      q.back = static_cast<std::int64_t>(back);
      std::copy(prefix.begin(), prefix.end(), q.items.begin());
      out.push_back(q.encode());
    });
  }
  return out;
}

// ---------------------------------------------------------------- MS queue

MSQueueState MSQueueState::fresh(std::size_t pool) {
  MSQueueState s;
  s.nodes.resize(pool);
  s.nodes[0].allocated = true;
  return s;
}

MSQueueState MSQueueState::decode(const State& s) {
  if (s.cells.size() < 2 || (s.cells.size() - 2) % 3 != 0) throw UsageError("not an MS queue state");
  MSQueueState out;
  out.head = static_cast<std::size_t>(s.cells[0].as_int());
  out.tail = static_cast<std::size_t>(s.cells[1].as_int());
  const std::size_t pool = (s.cells.size() - 2) / 3;
  out.nodes.resize(pool);
  for (std::size_t k = 0; k < pool; ++k) {
    auto& n = out.nodes[k];
    n.value = s.cells[2 + 3 * k];
    const auto& next = s.cells[3 + 3 * k];
    if (next.is_int()) n.next = static_cast<std::size_t>(next.as_int());
    n.allocated = s.cells[4 + 3 * k].as_int() != 0;
  }
  return out;
}

State MSQueueState::encode() const {
  State s;
  s.cells.reserve(2 + 3 * nodes.size());
  s.cells.push_back(Value::integer(static_cast<std::int64_t>(head)));
  s.cells.push_back(Value::integer(static_cast<std::int64_t>(tail)));
  for (const auto& n : nodes) {
    s.cells.push_back(n.value);
    s.cells.push_back(n.next ? Value::integer(static_cast<std::int64_t>(*n.next)) : Value::null());
    s.cells.push_back(Value::integer(n.allocated ? 1 : 0));
  }
  return s;
}

std::optional<std::vector<std::size_t>> MSQueueState::list() const {
  std::vector<std::size_t> out;
  std::optional<std::size_t> cur = head;
  while (cur) {
    if (*cur >= nodes.size() || out.size() >= nodes.size()) return std::nullopt;
    out.push_back(*cur);
    cur = nodes[*cur].next;
  }
  return out;
}

std::optional<std::size_t> MSQueueState::free_node() const {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!nodes[k].allocated) return k;
  }
  return std::nullopt;
}

std::string MSQueueDomain::render(const State& s) const {
  const auto q = MSQueueState::decode(s);
  const auto lst = q.list();
  std::string out = "head=n" + std::to_string(q.head) + " list=";
  if (!lst) {
    out += "<cyclic>";
  } else {
    out += "[";
    for (std::size_t i = 0; i < lst->size(); ++i) {
      if (i) out += ',';
      out += "n" + std::to_string((*lst)[i]) + ":" + to_bare_string(q.nodes[(*lst)[i]].value);
    }
    out += "]";
  }
  return out + " tail=n" + std::to_string(q.tail);
}

State MSQueueDomain::parse(std::string_view text) const {
  const auto tok = split_ws(trim(text));
  if (tok.size() != 3) throw ParseError("expected 'head=nX list=[nX:v,...] tail=nY'");
  MSQueueState q;
  q.nodes.resize(pool_);
  q.head = parse_node_ref(expect_key(tok[0], "head="));
  q.tail = parse_node_ref(expect_key(tok[2], "tail="));
  auto body = expect_key(tok[1], "list=");
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') throw ParseError("malformed list");
  body = body.substr(1, body.size() - 2);
  std::optional<std::size_t> prev;
  std::size_t pos = 0;
  while (!body.empty() && pos <= body.size()) {
    const auto comma = body.find(',', pos);
    const auto entry = body.substr(pos, comma == std::string_view::npos ? body.size() - pos : comma - pos);
    const auto colon = entry.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected nX:value, got '" + std::string(entry) + "'");
    const std::size_t id = parse_node_ref(entry.substr(0, colon));
    if (id >= pool_) throw ParseError("node id out of range in '" + std::string(entry) + "'");
    if (q.nodes[id].allocated) throw ParseError("node listed twice: n" + std::to_string(id));
    q.nodes[id].allocated = true;
    q.nodes[id].value = parse_value(entry.substr(colon + 1));
    if (prev) q.nodes[*prev].next = id;
    prev = id;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  State s = q.encode();
  if (!is_well_formed(s)) throw ParseError("not a well-formed MS queue state: '" + std::string(text) + "'");
  return s;
}

bool MSQueueDomain::is_well_formed(const State& s) const {
  if (s.cells.size() != 2 + 3 * pool_) return false;
  const auto q = MSQueueState::decode(s);
  const auto lst = q.list();
  if (!lst || lst->empty()) return false;
  for (auto id : *lst) {
    if (!q.nodes[id].allocated) return false;
  }
  return q.tail == lst->back();
}

State MSQueueDomain::canonical(const State& s) const {
  const auto q = MSQueueState::decode(s);
  const auto lst = q.list();
  if (!lst) return s;
  MSQueueState c;
  c.nodes.resize(q.nodes.size());
  for (std::size_t i = 0; i < lst->size(); ++i) {
    c.nodes[i].allocated = true;
    c.nodes[i].value = q.nodes[(*lst)[i]].value;
    if (i + 1 < lst->size()) c.nodes[i].next = i + 1;
    if ((*lst)[i] == q.tail) c.tail = i;
  }
  c.head = 0;
  return c.encode();
}

std::vector<State> MSQueueDomain::enumerate(std::span<const Value> alphabet) const {
  std::vector<Value> dummy_choices{Value::null()};
  dummy_choices.insert(dummy_choices.end(), alphabet.begin(), alphabet.end());
  std::vector<State> out;
  for (std::size_t len = 1; len < pool_; ++len) {
    for (const auto& dummy : dummy_choices) {
      for_each_tuple(alphabet, len - 1, [&](const std::vector<Value>& payload) {
        MSQueueState q;
        q.nodes.resize(pool_);
        for (std::size_t i = 0; i < len; ++i) {
          q.nodes[i].allocated = true;
          q.nodes[i].value = i == 0 ? dummy : payload[i - 1];
          if (i + 1 < len) q.nodes[i].next = i + 1;
        }
        q.tail = len - 1;
        out.push_back(q.encode());
      });
    }
  }
  return out;
}

// ---------------------------------------------------------------- sequences

std::string SequenceDomain::render(const State& s) const { return "[" + join_bare(s.cells) + "]"; }

State SequenceDomain::parse(std::string_view text) const {
  State s{parse_value_list(text, '[', ']')};
  if (!is_well_formed(s)) throw ParseError("sequence exceeds capacity: '" + std::string(text) + "'");
  return s;
}

bool SequenceDomain::is_well_formed(const State& s) const {
  return capacity_ == 0 || s.cells.size() <= capacity_;
}

std::vector<State> SequenceDomain::enumerate(std::span<const Value> alphabet) const {
  std::vector<Value> head_choices(alphabet.begin(), alphabet.end());
  if (sample_.null_head) head_choices.insert(head_choices.begin(), Value::null());
  std::size_t max_len = sample_.max_length;
  if (capacity_ != 0) max_len = std::min(max_len, capacity_ - 1);
  std::vector<State> out;
  for (std::size_t len = sample_.min_length; len <= max_len; ++len) {
    if (len == 0) {
      out.push_back(State{});
      continue;
    }
    for (const auto& h : head_choices) {
      for_each_tuple(alphabet, len - 1, [&](const std::vector<Value>& rest) {
        State s;
        s.cells.push_back(h);
        s.cells.insert(s.cells.end(), rest.begin(), rest.end());
        out.push_back(std::move(s));
      });
    }
  }
  return out;
}

// ---------------------------------------------------------------- multisets

std::string MultisetDomain::render(const State& s) const { return "{" + join_bare(s.cells) + "}"; }

State MultisetDomain::parse(std::string_view text) const {
  State s{parse_value_list(text, '{', '}')};
  std::sort(s.cells.begin(), s.cells.end());
  return s;
}

bool MultisetDomain::is_well_formed(const State& s) const {
  return std::is_sorted(s.cells.begin(), s.cells.end());
}

std::vector<State> MultisetDomain::enumerate(std::span<const Value> alphabet) const {
  std::vector<State> out;
  for (std::size_t len = 0; len <= 3; ++len) {
    for_each_tuple(alphabet, len, [&](const std::vector<Value>& vals) {
      if (std::is_sorted(vals.begin(), vals.end())) out.push_back(State{vals});
    });
  }
  return out;
}

}  // namespace slin
