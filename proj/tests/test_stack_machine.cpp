#include <doctest.h>

#include "imp/error.hpp"
#include "imp/frontend.hpp"
#include "imp/fuzz.hpp"
#include "imp/stack_machine.hpp"
#include "support.hpp"

using namespace imp;
using namespace imp::stack;

namespace {

// Independent straight-through interpreter: runs `code` from pc 0 until pc
// leaves [0, size) and reports where it stopped and the final stack.
struct Trace {
  std::int64_t pc = 0;
  std::vector<Int> stack;
  Store store;
};

Trace trace(const Code &code, Store s, std::vector<Int> stack = {}) {
  Trace t{0, std::move(stack), std::move(s)};
  auto pop = [&] {
    REQUIRE(!t.stack.empty());
    Int v = t.stack.back();
    t.stack.pop_back();
    return v;
  };
  for (int guard = 0; t.pc >= 0 && t.pc < static_cast<std::int64_t>(code.size()); ++guard) {
    REQUIRE(guard < 100000);
    const Instr &in = code[static_cast<std::size_t>(t.pc)];
    std::int64_t next = t.pc + 1;
    switch (in.op) {
    case Opcode::Iconst: t.stack.push_back(in.n); break;
    case Opcode::Ivar: t.stack.push_back(t.store.get(in.x)); break;
    case Opcode::Isetvar: t.store.set(in.x, pop()); break;
    case Opcode::Iadd: { Int b = pop(), a = pop(); t.stack.push_back(a + b); break; }
    case Opcode::Isub: { Int b = pop(), a = pop(); t.stack.push_back(a - b); break; }
    case Opcode::Imul: { Int b = pop(), a = pop(); t.stack.push_back(a * b); break; }
    case Opcode::Ibranch: next += in.delta; break;
    case Opcode::Ibeq: case Opcode::Ibne: case Opcode::Ible: case Opcode::Ibgt: {
      Int b = pop(), a = pop();
      bool take = in.op == Opcode::Ibeq ? a == b : in.op == Opcode::Ibne ? a != b
                : in.op == Opcode::Ible ? a <= b : a > b;
      if (take) next += in.delta;
      break;
    }
    case Opcode::Ihalt: return t;
    }
    t.pc = next;
  }
  return t;
}

Store vm_done(const VmOutcome &o) {
  REQUIRE(std::holds_alternative<Done>(o));
  return std::get<Done>(o).store;
}

}  // namespace

TEST_CASE("compile_aexp examples") {
  CHECK(compile_aexp(add(lit(1), lit(2))) == Code{iconst(1), iconst(2), iadd()});
  CHECK(compile_aexp(var("a")) == Code{ivar("a")});
  CHECK(compile_aexp(neg(var("a"))) == Code{iconst(0), ivar("a"), isub()});
  CHECK_THROWS_AS(compile_aexp(bit_not(var("a"))), UnsupportedNode);
}

TEST_CASE("compiled expressions push exactly their value") {
  testing::ExprGen g(21);
  for (int i = 0; i < 500; ++i) {
    AExpr e = g.aexp(5);
    Store s = g.store();
    Code code = compile_aexp(e);
    Trace t = trace(code, s, {Int(42)});
    CHECK(t.pc == static_cast<std::int64_t>(code.size()));
    REQUIRE(t.stack.size() == 2);
    CHECK(t.stack[0] == 42);
    CHECK(t.stack[1] == aeval(s, e));
    CHECK(t.store == s);

    code.push_back(ihalt());
    CHECK(std::holds_alternative<Done>(vm_exec(1000, code, s)));
  }
}

TEST_CASE("compile_bexp examples") {
  CHECK(compile_bexp(blit(true), true, 3) == Code{ibranch(3)});
  CHECK(compile_bexp(blit(true), false, 3) == Code{});
  CHECK(compile_bexp(blit(false), false, 2) == Code{ibranch(2)});
  CHECK(compile_bexp(eq(var("a"), lit(1)), true, 4) == Code{ivar("a"), iconst(1), ibeq(4)});
  CHECK(compile_bexp(eq(var("a"), lit(1)), false, 4) == Code{ivar("a"), iconst(1), ibne(4)});
  CHECK(compile_bexp(le(var("a"), lit(1)), true, 4) == Code{ivar("a"), iconst(1), ible(4)});
  CHECK(compile_bexp(le(var("a"), lit(1)), false, 4) == Code{ivar("a"), iconst(1), ibgt(4)});
}

TEST_CASE("compile_bexp: And follows the published scheme") {
  BExpr b1 = eq(var("a"), lit(1)), b2 = eq(var("b"), lit(2));
  Code c2t = compile_bexp(b2, true, 5);
  Code c1t = compile_bexp(b1, false, static_cast<std::int64_t>(c2t.size()));
  Code expect_t = c1t;
  expect_t.insert(expect_t.end(), c2t.begin(), c2t.end());
  CHECK(compile_bexp(band(b1, b2), true, 5) == expect_t);

  Code c2f = compile_bexp(b2, false, 5);
  Code c1f = compile_bexp(b1, false, static_cast<std::int64_t>(c2f.size()) + 5);
  Code expect_f = c1f;
  expect_f.insert(expect_f.end(), c2f.begin(), c2f.end());
  CHECK(compile_bexp(band(b1, b2), false, 5) == expect_f);
}

TEST_CASE("compile_bexp lands at end+ofs exactly when the condition matches") {
  testing::ExprGen g(33);
  for (int i = 0; i < 500; ++i) {
    BExpr b = g.bexp(4);
    Store s = g.store(5);
    bool cond = g.pick(2) == 0;
    std::int64_t ofs = g.pick(6);
    Code code = compile_bexp(b, cond, ofs);
    // The trace stops at the first pc outside the code, which is the landing point.
    Trace t = trace(code, s);
    std::int64_t end = static_cast<std::int64_t>(code.size());
    std::int64_t expected = beval(s, b) == cond ? end + ofs : end;
    CHECK(t.pc == expected);
    CHECK(t.stack.empty());
  }
}

TEST_CASE("compile_com examples") {
  CHECK(compile_com(skip()).empty());
  CHECK(compile_com(assign("x", lit(1))) == Code{iconst(1), isetvar("x")});

  Com c = parse_program("if a = 0 then x := 1 else x := 2 end").body;
  Code then_code{iconst(1), isetvar("x")}, else_code{iconst(2), isetvar("x")};
  Code expect = compile_bexp(c->cond, false, 3);
  expect.insert(expect.end(), then_code.begin(), then_code.end());
  expect.push_back(ibranch(2));
  expect.insert(expect.end(), else_code.begin(), else_code.end());
  CHECK(compile_com(c) == expect);

  Com w = parse_program("while x <= 1 do x := x + 1 done").body;
  Code body = compile_com(w->first);
  Code cb = compile_bexp(w->cond, false, static_cast<std::int64_t>(body.size()) + 1);
  Code wexpect = cb;
  wexpect.insert(wexpect.end(), body.begin(), body.end());
  wexpect.push_back(ibranch(-static_cast<std::int64_t>(cb.size() + body.size() + 1)));
  CHECK(compile_com(w) == wexpect);
}

TEST_CASE("compile_program examples") {
  CHECK(compile_program(Program{{}, skip()}) == Code{ihalt()});
  CHECK(compile_program(Program{{}, assign("x", lit(1))}) == Code{iconst(1), isetvar("x"), ihalt()});
  Program p = parse_program("x := 0; while x <= 1 do x := x + 1 done");
  CHECK(vm_done(vm_exec(100, compile_program(p), {})) == Store{{"x", 2}});
  CHECK(std::get<Done>(ceval_fuel(100, p.body, {})).store == Store{{"x", 2}});
}

TEST_CASE("vm_exec examples") {
  CHECK(vm_done(vm_exec(10, {ihalt()}, {{"a", 1}})) == Store{{"a", 1}});
  CHECK(std::holds_alternative<OutOfFuel>(vm_exec(2, {iconst(1), iconst(2), iadd(), ihalt()}, {})));
  auto err = vm_exec(1, {iadd(), ihalt()}, {});
  REQUIRE(std::holds_alternative<MachineError>(err));
  CHECK(std::get<MachineError>(err).reason.find("underflow") != std::string::npos);
  CHECK(std::holds_alternative<MachineError>(vm_exec(10, {ibranch(5)}, {})));
  CHECK(std::holds_alternative<MachineError>(vm_exec(10, {}, {})));
}

TEST_CASE("listing format") {
  CHECK(listing({iconst(5), ibranch(-7), isetvar("x"), ihalt()}) == "ICONST 5\nIBRANCH -7\nISETVAR x\nIHALT\n");
}

TEST_CASE("semantic preservation over generated programs") {
  fuzz::GenSpec spec;
  spec.seed = 5;
  for (std::size_t i = 0; i < 500; ++i) {
    fuzz::Case c = fuzz::make_case(spec, i);
    Outcome ref = ceval_fuel(c.fuel, c.program.body, c.store);
    REQUIRE(is_done(ref));
    Code code = compile_program(c.program);
    CHECK(branches_in_bounds(code));
    CHECK(code.back() == ihalt());
    std::size_t halts = 0;
    for (const auto &in : code) halts += in.op == Opcode::Ihalt;
    CHECK(halts == 1);

    VmOutcome o = OutOfFuel{};
    for (std::uint64_t f = 64; std::holds_alternative<OutOfFuel>(o); f *= 2) o = vm_exec(f, code, c.store);
    CHECK(vm_done(o) == std::get<Done>(ref).store);

    // Commands leave the operand stack balanced.
    Trace t = trace(compile_com(c.program.body), c.store);
    CHECK(t.stack.empty());
  }
}

TEST_CASE("vm_exec fuel monotonicity") {
  Program p = parse_program("x := 0; while x < 5 do x := x + 1 done");
  Code code = compile_program(p);
  std::uint64_t least = 0;
  while (!std::holds_alternative<Done>(vm_exec(least, code, {}))) ++least;
  for (std::uint64_t f = least; f < least + 20; ++f) CHECK(vm_done(vm_exec(f, code, {})) == Store{{"x", 5}});
}
