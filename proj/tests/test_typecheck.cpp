#include <doctest.h>

#include <random>

#include "imp/error.hpp"
#include "imp/frontend.hpp"
#include "imp/typecheck.hpp"
#include "support.hpp"

using namespace imp;

namespace {

// Annotated right-hand side of `x := <expr>` under the given declarations.
AExpr typed_rhs(const std::string &decls, const std::string &expr) {
  TypedProgram tp = typecheck(parse_program(decls + " x := " + expr));
  return tp.program.body->rhs;
}

Word32 eval_in(const std::string &decls, const std::string &expr, const Store32 &s = {}) {
  return eval_fixed(s, typed_rhs(decls, expr));
}

Store32 run(const std::string &src, const Store32 &s = {}) {
  TypedProgram tp = typecheck(parse_program(src));
  Outcome32 o = ceval_fixed(1000, tp.program.body, s);
  REQUIRE(std::holds_alternative<Done32>(o));
  return std::get<Done32>(o).store;
}

}  // namespace

TEST_CASE("well-typed programs are accepted and annotated") {
  TypedProgram tp = typecheck(parse_program("var x: u32; var y: i32; x := u32(y) + 1"));
  CHECK(tp.env == TypeEnv{{"x", Ty::U32}, {"y", Ty::I32}});
  AExpr rhs = tp.program.body->rhs;
  CHECK(rhs->ty == Ty::U32);
  CHECK(rhs->lhs->ty == Ty::U32);
  CHECK(rhs->lhs->lhs->ty == Ty::I32);
  CHECK(rhs->rhs->ty == Ty::U32);
}

TEST_CASE("mixing signedness without a cast is rejected") {
  CHECK_THROWS_AS(typecheck(parse_program("var x: u32; var y: i32; x := x + y")), TypeError);
  CHECK_THROWS_AS(typecheck(parse_program("var x: u32; var y: i32; x := y")), TypeError);
  CHECK_THROWS_AS(typecheck(parse_program("var x: u32; var y: i32; if x < y then skip else skip end")), TypeError);
  CHECK_THROWS_AS(typecheck(parse_program("var y: i32; y := y & 1")), TypeError);
  CHECK_THROWS_AS(typecheck(parse_program("var y: i32; y := ~y")), TypeError);
  CHECK_NOTHROW(typecheck(parse_program("var x: u32; var y: i32; x := x + u32(y)")));
}

TEST_CASE("type errors point at the offending operand") {
  try {
    typecheck(parse_program("var x: u32; var y: i32;\nx := x + y"));
    FAIL("expected TypeError");
  } catch (const TypeError &e) {
    CHECK(e.pos() == SourcePos{2, 10});
  }
}

TEST_CASE("undeclared variables are rejected in typed mode") {
  CHECK_THROWS_AS(typecheck(parse_program("var x: u32; x := z")), UndeclaredVariable);
  CHECK_THROWS_AS(typecheck(parse_program("var x: u32; z := x")), UndeclaredVariable);
}

TEST_CASE("untyped declarations read as i32") {
  TypedProgram tp = typecheck(parse_program("var x; x := x - 1"));
  CHECK(tp.env == TypeEnv{{"x", Ty::I32}});
  CHECK(declared_env(parse_program("var a; var b: u32; skip")) == TypeEnv{{"a", Ty::I32}, {"b", Ty::U32}});
}

TEST_CASE("natural and comparison types") {
  TypeEnv env{{"u", Ty::U32}, {"s", Ty::I32}};
  CHECK(natural_type(parse_aexp("1 + 2"), env) == std::nullopt);
  CHECK(natural_type(parse_aexp("1 + u"), env) == Ty::U32);
  CHECK(natural_type(parse_aexp("i32(u)"), env) == Ty::I32);
  CHECK(natural_type(parse_aexp("~1"), env) == Ty::U32);
  CHECK(comparison_type(parse_bexp("1 < 2"), env) == Ty::I32);
  CHECK(comparison_type(parse_bexp("1 < u"), env) == Ty::U32);
}

TEST_CASE("eval_fixed wraps modulo 2^32") {
  CHECK(eval_in("var x: u32;", "x + 1", {{"x", 0xFFFFFFFFu}}) == 0u);
  CHECK(eval_in("var x: i32;", "x + 1", {{"x", 0x7FFFFFFFu}}) == 0x80000000u);
  CHECK(eval_in("var x: u32;", "0 - 1") == 0xFFFFFFFFu);
  CHECK(eval_in("var x: i32;", "65536 * 65536") == 0u);
  CHECK(eval_in("var x: i32;", "-5") == 0xFFFFFFFBu);
  CHECK(eval_in("var x: u32;", "4294967296 + 3") == 3u);
}

TEST_CASE("the same bits order differently as u32 and i32") {
  Store32 s{{"u", 0xFFFFFFFFu}, {"s", 0xFFFFFFFFu}};
  Store32 r = run("var u: u32; var s: i32; var a: i32; var b: i32;"
                  "if u <= 0 then a := 1 else a := 0 end;"
                  "if s <= 0 then b := 1 else b := 0 end",
                  s);
  CHECK(r.at("a") == 0u);
  CHECK(r.at("b") == 1u);
  Store32 t = run("var u: u32; var c: i32; if 0 < u then c := 1 else c := 2 end", {{"u", 0x80000000u}});
  CHECK(t.at("c") == 1u);
}

TEST_CASE("casts reinterpret bits and are involutive") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    Word32 w = static_cast<Word32>(rng());
    CHECK(eval_in("var x: u32;", "u32(i32(x))", {{"x", w}}) == w);
    CHECK(eval_in("var x: i32; var y: u32;", "i32(u32(x))", {{"x", w}}) == w);
    CHECK(eval_in("var x: i32; var y: u32;", "i32(y)", {{"y", w}}) == w);
  }
}

TEST_CASE("bit operations and shifts") {
  Store32 s{{"x", 0xF0F0F0F0u}, {"y", 0x0FF00FF0u}};
  CHECK(eval_in("var x: u32; var y: u32;", "x & y", s) == (0xF0F0F0F0u & 0x0FF00FF0u));
  CHECK(eval_in("var x: u32; var y: u32;", "x | y", s) == (0xF0F0F0F0u | 0x0FF00FF0u));
  CHECK(eval_in("var x: u32; var y: u32;", "x ^ y", s) == (0xF0F0F0F0u ^ 0x0FF00FF0u));
  CHECK(eval_in("var x: u32; var y: u32;", "~x", s) == 0x0F0F0F0Fu);
  CHECK(eval_in("var x: u32;", "x >> 4", s) == 0x0F0F0F0Fu);
  CHECK(eval_in("var x: u32;", "x << 4", s) == 0x0F0F0F00u);
  CHECK(eval_in("var x: u32;", "x << 36", s) == 0x0F0F0F00u);
  CHECK(eval_in("var x: u32;", "x >> 32", s) == 0xF0F0F0F0u);
}

TEST_CASE("shift amounts act modulo 32") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Word32 w = static_cast<Word32>(rng());
    Word32 k = static_cast<Word32>(rng() % 100);
    Store32 s{{"x", w}, {"k", k}};
    CHECK(eval_in("var x: u32; var k: u32;", "x << k", s) == (w << (k % 32)));
    CHECK(eval_in("var x: u32; var k: u32;", "x >> k", s) == (w >> (k % 32)));
  }
}

TEST_CASE("wrapping evaluation is coherent with aeval on small values") {
  testing::ExprGen g(19);
  for (int i = 0; i < 1000; ++i) {
    AExpr e = g.aexp(4);
    Store s = g.store(10);
    Program p{{{"a", DeclTy::I32}, {"b", DeclTy::I32}, {"c", DeclTy::I32}, {"x", DeclTy::I32}}, assign("x", e)};
    TypedProgram tp = typecheck(p);
    Word32 w = eval_fixed(inject(s), tp.program.body->rhs);
    Int exact = aeval(s, e);
    CHECK(w == parse_word(exact.str()));
    if (exact >= INT32_MIN && exact <= INT32_MAX) CHECK(render(w, Ty::I32) == exact.str());
  }
}

TEST_CASE("render, parse_word and inject") {
  CHECK(render(0xFFFFFFFFu, Ty::I32) == "-1");
  CHECK(render(0xFFFFFFFFu, Ty::U32) == "4294967295");
  CHECK(render(0x80000000u, Ty::I32) == "-2147483648");
  CHECK(parse_word("-1") == 0xFFFFFFFFu);
  CHECK(parse_word("4294967296") == 0u);
  CHECK(parse_word("-4294967297") == 0xFFFFFFFFu);
  CHECK(inject(Store{{"a", -2}, {"b", Int(1) << 40}}) == Store32{{"a", 0xFFFFFFFEu}, {"b", 0u}});
  CHECK(same_words({{"a", 0}}, {}));
  CHECK_FALSE(same_words({{"a", 1}}, {}));
}

TEST_CASE("ceval_fixed shares the fuel discipline of ceval_fuel") {
  TypedProgram tp = typecheck(parse_program("var x: i32; while 1 <= x do x := x - 1 done"));
  CHECK(std::holds_alternative<Done32>(ceval_fixed(4, tp.program.body, {{"x", 3}})));
  CHECK(std::holds_alternative<OutOfFuel>(ceval_fixed(3, tp.program.body, {{"x", 3}})));
}
