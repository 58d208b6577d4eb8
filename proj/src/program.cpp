#include "slin/program.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace slin {

// ---------------------------------------------------------------- evaluation

namespace {

bool truthy(const Value& v) {
  if (!v.is_int()) throw EvalError("expected a boolean (integer), got " + to_string(v));
  return v.as_int() != 0;
}

std::int64_t int_operand(const Value& v, std::string_view op) {
  if (!v.is_int()) throw EvalError("operator " + std::string(op) + " needs integers, got " + to_string(v));
  return v.as_int();
}

Value boolean(bool b) { return Value::integer(b ? 1 : 0); }

}  // namespace

Value evaluate(const Expr& e, std::span<const Value> vars) {
  switch (e.kind) {
    case Expr::Kind::Literal: return e.value;
    case Expr::Kind::Var: return vars[e.var];
    case Expr::Kind::Not: return boolean(!truthy(evaluate(e.kids[0], vars)));
    case Expr::Kind::Neg: return Value::integer(-int_operand(evaluate(e.kids[0], vars), "-"));
    case Expr::Kind::Binary: break;
  }
  const auto& op = e.op;
  if (op == "&&") return boolean(truthy(evaluate(e.kids[0], vars)) && truthy(evaluate(e.kids[1], vars)));
  if (op == "||") return boolean(truthy(evaluate(e.kids[0], vars)) || truthy(evaluate(e.kids[1], vars)));
  const Value a = evaluate(e.kids[0], vars);
  const Value b = evaluate(e.kids[1], vars);
  if (op == "==") return boolean(a == b);
  if (op == "!=") return boolean(a != b);
  const auto x = int_operand(a, op);
  const auto y = int_operand(b, op);
  if (op == "<") return boolean(x < y);
  if (op == "<=") return boolean(x <= y);
  if (op == ">") return boolean(x > y);
  if (op == ">=") return boolean(x >= y);
  if (op == "+") return Value::integer(x + y);
  if (op == "-") return Value::integer(x - y);
  if (op == "*") return Value::integer(x * y);
  throw EvalError("unknown operator " + op);
}

std::string to_string(const Expr& e, std::span<const std::string> var_names) {
  switch (e.kind) {
    case Expr::Kind::Literal: return to_string(e.value);
    case Expr::Kind::Var: return var_names[e.var];
    case Expr::Kind::Not: return "!" + to_string(e.kids[0], var_names);
    case Expr::Kind::Neg: return "-" + to_string(e.kids[0], var_names);
    case Expr::Kind::Binary:
      return "(" + to_string(e.kids[0], var_names) + " " + e.op + " " + to_string(e.kids[1], var_names) + ")";
  }
  return {};
}

// ---------------------------------------------------------------- lexing

namespace {

enum class Tok { Ident, Int, Symbol, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
};

std::vector<Token> lex(std::string_view src) {
  static const std::vector<std::string> puncts{"<-", "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(",
                                               ")",  "[",  "]",  ";",  ",",  ".",  "=",  "<",  ">", "+",
                                               "-",  "*",  "!"};
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#' || src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto start = i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), line});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      const auto start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      out.push_back({Tok::Int, std::string(src.substr(start, i - start)), line});
    } else if (c == '\'') {
      const auto close = src.find('\'', i + 1);
      if (close == std::string_view::npos) throw ParseError("unterminated symbol literal", line);
      out.push_back({Tok::Symbol, std::string(src.substr(i, close - i + 1)), line});
      i = close + 1;
    } else {
      bool matched = false;
      for (const auto& p : puncts) {
        if (src.substr(i, p.size()) == p) {
          out.push_back({Tok::Punct, p, line});
          i += p.size();
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line);
    }
  }
  out.push_back({Tok::End, "", line});
  return out;
}

// ---------------------------------------------------------------- parsing

Instr instr(InstrKind kind, std::size_t line) {
  Instr in;
  in.kind = kind;
  in.line = line;
  return in;
}

Expr node(Expr::Kind kind) {
  Expr e;
  e.kind = kind;
  return e;
}

Expr literal(Value v) {
  Expr e;
  e.value = v;
  return e;
}

struct Exit {
  std::size_t index;
  bool false_branch;
};

struct Fragment {
  std::optional<std::size_t> entry;
  std::vector<Exit> exits;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program run() {
    bool saw_phase = false;
    bool saw_thread = false;
    while (!at_end()) {
      if (accept(";")) continue;
      if (accept_word("var")) {
        declaration();
      } else if (accept_word("thread")) {
        if (saw_phase) throw error("top-level threads cannot be mixed with phase blocks");
        saw_thread = true;
        thread(0);
      } else if (accept_word("phase")) {
        if (saw_thread) throw error("phase blocks cannot be mixed with top-level threads");
        saw_phase = true;
        phase();
      } else {
        throw error("expected 'var', 'thread' or 'phase'");
      }
    }
    for (const auto& [name, used_line] : reads_) {
      if (!assigned_.contains(name)) throw ParseError("variable '" + name + "' is never assigned", used_line);
    }
    prog_.phases = saw_phase ? phase_count_ : (prog_.threads.empty() ? 0 : 1);
    return std::move(prog_);
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  ParseError error(const std::string& msg) const {
    const auto& t = peek();
    return ParseError(msg + (t.kind == Tok::End ? " at end of input" : ", found '" + t.text + "'"), t.line);
  }

  bool is(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }
  bool accept(std::string_view p) {
    if (!is(p)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) throw error("expected '" + std::string(p) + "'");
  }
  std::string ident(std::string_view what) {
    if (peek().kind != Tok::Ident) throw error("expected " + std::string(what));
    return take().text;
  }

  std::size_t slot(const std::string& name) {
    static const std::set<std::string> reserved{"var",  "thread", "phase", "call",  "read", "write",
                                                "atomic", "when", "if",    "else",  "while", "skip",
                                                "null", "EMPTY", "unit",  "true",  "false"};
    if (reserved.contains(name)) throw error("'" + name + "' is a keyword");
    auto it = std::find(prog_.var_names.begin(), prog_.var_names.end(), name);
    if (it != prog_.var_names.end()) return static_cast<std::size_t>(it - prog_.var_names.begin());
    prog_.var_names.push_back(name);
    prog_.var_init.push_back(Value::null());
    return prog_.var_names.size() - 1;
  }

  std::size_t assign_slot(const std::string& name) {
    assigned_.insert(name);
    return slot(name);
  }

  void declaration() {
    const auto line = peek().line;
    const std::string name = ident("variable name");
    if (std::find(prog_.var_names.begin(), prog_.var_names.end(), name) != prog_.var_names.end()) {
      throw ParseError("variable '" + name + "' declared twice or used before its declaration", line);
    }
    const std::size_t s = assign_slot(name);
    expect("=");
    const Expr init = expr();
    try {
      prog_.var_init[s] = evaluate(init, prog_.var_init);
    } catch (const EvalError& e) {
      throw ParseError(e.what(), line);
    }
  }

  void phase() {
    expect("{");
    const std::size_t index = phase_count_++;
    while (!accept("}")) {
      if (accept(";")) continue;
      if (!accept_word("thread")) throw error("expected 'thread' inside phase");
      thread(index);
    }
  }

  void thread(std::size_t phase) {
    ThreadCode tc;
    tc.phase = phase;
    code_ = &tc.code;
    expect("{");
    const Fragment body = block_body();
    patch(body.exits, tc.code.size());
    code_ = nullptr;
    prog_.threads.push_back(std::move(tc));
  }

  // Statements up to and including the closing brace.
  Fragment block_body() {
    Fragment acc;
    while (!accept("}")) {
      if (at_end()) throw error("missing '}'");
      if (accept(";")) continue;
      Fragment f = statement();
      if (!acc.entry) {
        acc = std::move(f);
      } else {
        patch(acc.exits, *f.entry);
        acc.exits = std::move(f.exits);
      }
    }
    return acc;
  }

  Fragment block() {
    expect("{");
    return block_body();
  }

  void patch(const std::vector<Exit>& exits, std::size_t target) {
    for (const auto& x : exits) {
      auto& in = (*code_)[x.index];
      (x.false_branch ? in.next_false : in.next) = target;
    }
  }

  std::size_t emit(Instr in) {
    code_->push_back(std::move(in));
    return code_->size() - 1;
  }

  Fragment simple(Instr in) {
    const auto i = emit(std::move(in));
    return {i, {{i, false}}};
  }

  void object_ref() {
    const std::string obj = ident("object name");
    if (prog_.object.empty()) {
      prog_.object = obj;
    } else if (prog_.object != obj) {
      throw error("programs use a single object; '" + prog_.object + "' and '" + obj + "' differ");
    }
    expect(".");
  }

  Instr call(std::optional<std::size_t> target, std::size_t line) {
    object_ref();
    Instr in = instr(InstrKind::Call, line);
    in.target = target;
    in.method = ident("method name");
    expect("(");
    if (!accept(")")) {
      in.expr = expr();
      expect(")");
    }
    return in;
  }

  std::string cell() {
    std::string c = ident("cell name");
    if (accept("[")) {
      if (peek().kind != Tok::Int) throw error("expected cell index");
      c += "[" + take().text + "]";
      expect("]");
    }
    return c;
  }

  Fragment statement() {
    const std::size_t line = peek().line;
    if (accept_word("skip")) return simple(instr(InstrKind::Skip, line));
    if (accept_word("call")) {
      std::optional<std::size_t> target;
      if (peek().kind == Tok::Ident && is("=", 1)) {
        target = assign_slot(take().text);
        expect("=");
      }
      return simple(call(target, line));
    }
    if (accept_word("write")) {
      object_ref();
      Instr in = instr(InstrKind::Write, line);
      in.cell = cell();
      expect("<-");
      in.expr = expr();
      return simple(std::move(in));
    }
    if (accept_word("atomic")) {
      Instr in = instr(InstrKind::Atomic, line);
      if (accept_word("when")) in.expr = expr();
      expect("{");
      while (!accept("}")) {
        if (accept(";")) continue;
        const std::size_t s = assign_slot(ident("variable name"));
        expect("=");
        in.assigns.emplace_back(s, expr());
      }
      return simple(std::move(in));
    }
    if (accept_word("if")) {
      Instr in = instr(InstrKind::Branch, line);
      in.expr = expr();
      const auto b = emit(std::move(in));
      Fragment out{b, {}};
      const Fragment then_f = block();
      if (then_f.entry) {
        (*code_)[b].next = *then_f.entry;
        out.exits = then_f.exits;
      } else {
        out.exits.push_back({b, false});
      }
      Fragment else_f;
      if (accept_word("else")) else_f = block();
      if (else_f.entry) {
        (*code_)[b].next_false = *else_f.entry;
        out.exits.insert(out.exits.end(), else_f.exits.begin(), else_f.exits.end());
      } else {
        out.exits.push_back({b, true});
      }
      return out;
    }
    if (accept_word("while")) {
      Instr in = instr(InstrKind::Branch, line);
      in.expr = expr();
      const auto b = emit(std::move(in));
      const Fragment body = block();
      if (body.entry) {
        (*code_)[b].next = *body.entry;
        patch(body.exits, b);
      } else {
        (*code_)[b].next = b;
      }
      return {b, {{b, true}}};
    }
    if (peek().kind == Tok::Ident && is("=", 1)) {
      const std::string name = take().text;
      expect("=");
      const std::size_t s = assign_slot(name);
      if (accept_word("read")) {
        object_ref();
        Instr in = instr(InstrKind::Read, line);
        in.target = s;
        in.cell = cell();
        return simple(std::move(in));
      }
      if (peek().kind == Tok::Ident && is(".", 1)) return simple(call(s, line));
      Instr in = instr(InstrKind::Assign, line);
      in.target = s;
      in.expr = expr();
      return simple(std::move(in));
    }
    throw error("expected a statement");
  }

  // Precedence climbing.
  Expr expr() { return binary(0); }

  static int precedence(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=") return 3;
    if (op == "+" || op == "-") return 4;
    if (op == "*") return 5;
    return 0;
  }

  Expr binary(int min_prec) {
    Expr lhs = unary();
    while (peek().kind == Tok::Punct) {
      const std::string op = peek().text;
      const int prec = precedence(op);
      if (prec == 0 || prec <= min_prec) break;
      ++pos_;
      Expr rhs = binary(prec);
      Expr bin = node(Expr::Kind::Binary);
      bin.op = op;
      bin.kids.push_back(std::move(lhs));
      bin.kids.push_back(std::move(rhs));
      lhs = std::move(bin);
    }
    return lhs;
  }

  Expr unary() {
    if (accept("!")) {
      Expr e = node(Expr::Kind::Not);
      e.kids.push_back(unary());
      return e;
    }
    if (accept("-")) {
      Expr e = node(Expr::Kind::Neg);
      e.kids.push_back(unary());
      return e;
    }
    if (accept("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Symbol) {
      ++pos_;
      try {
        return literal(parse_value(t.text));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), t.line);
      }
    }
    if (t.kind == Tok::Ident) {
      ++pos_;
      if (t.text == "true") return literal(Value::integer(1));
      if (t.text == "false") return literal(Value::integer(0));
      if (t.text == "null" || t.text == "EMPTY" || t.text == "unit") {
        return literal(parse_value(t.text));
      }
      reads_.emplace(t.text, t.line);
      Expr e = node(Expr::Kind::Var);
      e.var = slot(t.text);
      return e;
    }
    throw error("expected an expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program prog_;
  std::vector<Instr>* code_ = nullptr;
  std::size_t phase_count_ = 0;
  std::set<std::string> assigned_;
  std::map<std::string, std::size_t> reads_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).run(); }

std::vector<std::string> Program::methods_called() const {
  std::set<std::string> out;
  for (const auto& t : threads) {
    for (const auto& in : t.code) {
      if (in.kind == InstrKind::Call) out.insert(in.method);
    }
  }
  return {out.begin(), out.end()};
}

std::string describe(const Program& p, const Instr& in) {
  const auto var = [&](std::size_t s) { return p.var_names[s]; };
  const auto ex = [&](const Expr& e) { return to_string(e, p.var_names); };
  switch (in.kind) {
    case InstrKind::Assign: return var(*in.target) + " := " + ex(*in.expr);
    case InstrKind::Call: {
      std::string out = in.target ? var(*in.target) + " := " : "";
      return out + p.object + "." + in.method + "(" + (in.expr ? ex(*in.expr) : "") + ")";
    }
    case InstrKind::Read: return var(*in.target) + " := read " + p.object + "." + in.cell;
    case InstrKind::Write: return "write " + p.object + "." + in.cell + " <- " + ex(*in.expr);
    case InstrKind::Atomic: {
      std::string out = "atomic";
      if (in.expr) out += " when " + ex(*in.expr);
      out += " {";
      for (std::size_t i = 0; i < in.assigns.size(); ++i) {
        out += (i ? "; " : " ") + var(in.assigns[i].first) + " := " + ex(in.assigns[i].second);
      }
      return out + " }";
    }
    case InstrKind::Branch: return "test " + ex(*in.expr);
    case InstrKind::Skip: return "skip";
  }
  return {};
}

}  // namespace slin
