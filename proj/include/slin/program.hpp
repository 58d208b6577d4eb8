#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slin/value.hpp"

namespace slin {

/// Raised when a client expression cannot be evaluated (type mismatch, unknown
/// operator). The explorer turns it into an aborting transition.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Expr {
  enum class Kind { Literal, Var, Not, Neg, Binary };
  Kind kind = Kind::Literal;
  Value value;            // Literal
  std::size_t var = 0;    // Var
  std::string op;         // Binary
  std::vector<Expr> kids;
};

/// Booleans are the integers 1 and 0. Equality works on every value; ordering
/// and arithmetic only on integers.
Value evaluate(const Expr& e, std::span<const Value> vars);
std::string to_string(const Expr& e, std::span<const std::string> var_names);

enum class InstrKind { Assign, Call, Read, Write, Atomic, Branch, Skip };

/// One client instruction. Every instruction is an explicit transition; control
/// flow lives in `next` / `next_false` (Branch only). Index == code size means
/// the thread is done.
struct Instr {
  InstrKind kind = InstrKind::Skip;
  std::size_t line = 0;
  std::optional<std::size_t> target;  // Assign, Read, Call result
  std::string method;                 // Call
  std::optional<Expr> expr;           // Assign value, Call argument, Write value, Branch test, Atomic guard
  std::string cell;                   // Read, Write
  std::vector<std::pair<std::size_t, Expr>> assigns;  // Atomic, simultaneous
  std::size_t next = 0;
  std::size_t next_false = 0;
};

struct ThreadCode {
  std::size_t phase = 0;
  std::vector<Instr> code;
};

/// A client program over one shared object. Threads of phase k start only
/// after every thread of the earlier phases has finished.
struct Program {
  std::vector<std::string> var_names;
  std::vector<Value> var_init;
  std::string object;  // name the calls use, e.g. "Q"; empty if the program makes none
  std::vector<ThreadCode> threads;
  std::size_t phases = 0;

  std::vector<std::string> methods_called() const;
};

/// Grammar (statements separated by `;` or newlines; `#` or `//` comments):
///
///   program := { 'var' NAME '=' expr | 'thread' block | 'phase' '{' { 'thread' block } '}' }
///   block   := '{' { stmt } '}'
///   stmt    := 'call' [NAME '='] OBJ '.' METHOD '(' [expr] ')'
///            | NAME '=' OBJ '.' METHOD '(' [expr] ')'
///            | NAME '=' 'read' OBJ '.' CELL
///            | 'write' OBJ '.' CELL '<-' expr
///            | NAME '=' expr
///            | 'atomic' ['when' expr] '{' { NAME '=' expr } '}'
///            | 'if' expr block [ 'else' block ]
///            | 'while' expr block
///            | 'skip'
///   CELL    := NAME [ '[' INT ']' ]
///
/// Literals: integers, 'sym', null, EMPTY, unit, true, false. Operators, loosest
/// first: `||`, `&&`, comparisons, `+ -`, `*`, unary `! -`.
/// Top-level threads and phase blocks cannot be mixed.
Program parse_program(std::string_view text);

/// Text of one instruction for traces, e.g. `y := Q.Dequeue()`.
std::string describe(const Program& p, const Instr& in);

}  // namespace slin
