#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "slin/program.hpp"
#include "slin/reproduce.hpp"
#include "slin/workloads.hpp"

using namespace slin;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> described(const Program& p, std::size_t thread) {
  std::vector<std::string> out;
  for (const auto& in : p.threads[thread].code) out.push_back(describe(p, in));
  return out;
}

}  // namespace

TEST(Program, ParsesCallsAndVariables) {
  const Program p = parse_program("var x = 'x'\nthread { y = Q.Dequeue(); call Q.Enqueue(x) }\n");
  EXPECT_EQ(p.object, "Q");
  EXPECT_EQ(p.var_names, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(p.var_init[0], Value::symbol("x"));
  EXPECT_EQ(p.var_init[1], Value::null());
  EXPECT_EQ(described(p, 0), (std::vector<std::string>{"y := Q.Dequeue()", "Q.Enqueue(x)"}));
  EXPECT_EQ(p.methods_called(), (std::vector<std::string>{"Dequeue", "Enqueue"}));
}

TEST(Program, ControlFlowBecomesBranches) {
  const Program p = parse_program(
      "thread {\n"
      "  n = 0\n"
      "  while n < 2 { n = n + 1 }\n"
      "  if n == 2 { skip } else { n = 0 }\n"
      "}\n");
  const auto& code = p.threads[0].code;
  ASSERT_EQ(code.size(), 6u);
  EXPECT_EQ(code[1].kind, InstrKind::Branch);
  EXPECT_EQ(describe(p, code[1]), "test (n < 2)");
  EXPECT_EQ(code[1].next, 2u);
  EXPECT_EQ(code[1].next_false, 3u);
  EXPECT_EQ(code[2].next, 1u);
  EXPECT_EQ(code[3].next_false, 5u);
  EXPECT_EQ(code[4].next, 6u);
}

TEST(Program, AtomicReadWriteAndPhases) {
  const Program p = parse_program(
      "phase { thread { v = read Q.items[1] } }\n"
      "phase { thread { write Q.items[2] <- 'c'; atomic when v == null { v = 1; w = 2 } } }\n");
  EXPECT_EQ(p.phases, 2u);
  EXPECT_EQ(p.threads[0].phase, 0u);
  EXPECT_EQ(p.threads[1].phase, 1u);
  EXPECT_EQ(described(p, 0), std::vector<std::string>{"v := read Q.items[1]"});
  EXPECT_EQ(described(p, 1),
            (std::vector<std::string>{"write Q.items[2] <- 'c'", "atomic when (v == null) { v := 1; w := 2 }"}));
}

TEST(Program, Errors) {
  EXPECT_THROW(parse_program("thread { call Q.Enqueue('a') }\nphase { thread { skip } }\n"), ParseError);
  EXPECT_THROW(parse_program("thread { y = Q.Dequeue(); call R.Dequeue() }"), ParseError);
  EXPECT_THROW(parse_program("thread { x = y }"), ParseError);
  EXPECT_THROW(parse_program("thread { while = 1 }"), ParseError);
  EXPECT_THROW(parse_program("var x = 1\nvar x = 2\n"), ParseError);
  EXPECT_THROW(parse_program("thread { skip "), ParseError);
  EXPECT_THROW(parse_program("thread { x = 'unterminated }"), ParseError);
  try {
    parse_program("thread {\n  skip\n  ?\n}\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Expr, EvaluatesIntegersAndEquality) {
  const Program p = parse_program("var a = 2 * 3 + 1\nvar b = !(a > 6) || a == 7\nvar c = 'q' != null\n");
  EXPECT_EQ(p.var_init[0], Value::integer(7));
  EXPECT_EQ(p.var_init[1], Value::integer(1));
  EXPECT_EQ(p.var_init[2], Value::integer(1));
  EXPECT_THROW(parse_program("var a = 'q' + 1\n"), ParseError);
}

TEST(Program, ShippedProgramsMatchTheBuiltIns) {
  for (const char* name : {"two-enqueues", "three-phase", "enqueue-dequeue"}) {
    const std::string file = slurp(std::string(SLIN_SOURCE_DIR) + "/programs/" + name + ".prog");
    EXPECT_EQ(file, builtin_program(name)) << name;
  }
}

TEST(Workloads, ProgramTextParses) {
  const auto all = two_by_two_workloads();
  EXPECT_EQ(all.size(), 65u);
  for (const auto& w : all) {
    const Program p = parse_program(queue_program_text(w));
    EXPECT_EQ(p.threads.size(), 2u);
  }
  EXPECT_EQ(queue_program_text({{"E:a", "D"}, {"D"}}),
            "thread { call Q.Enqueue('a'); r12 = Q.Dequeue() }\nthread { r21 = Q.Dequeue() }\n");
  for (const auto& w : random_workloads(20, 1)) EXPECT_NO_THROW(parse_program(queue_program_text(w)));
}
