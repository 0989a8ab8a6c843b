#include <doctest.h>

#include "imp/error.hpp"
#include "imp/frontend.hpp"
#include "imp/fuzz.hpp"
#include "imp/semantics.hpp"
#include "support.hpp"

using namespace imp;

namespace {

Com body(const char *src) { return parse_program(src).body; }

Store done_store(const Outcome &o) {
  REQUIRE(is_done(o));
  return std::get<Done>(o).store;
}

}  // namespace

TEST_CASE("aeval examples") {
  CHECK(aeval({{"a", 5}}, parse_aexp("a + 1 + 2")) == 8);
  CHECK(aeval({}, var("x")) == 0);
  CHECK(aeval({{"a", 3}}, parse_aexp("a - a")) == 0);
}

TEST_CASE("aeval is exact beyond 64 bits") {
  Store s{{"x", Int(1) << 70}};
  CHECK(aeval(s, parse_aexp("x * x - 1")) == (Int(1) << 140) - 1);
}

TEST_CASE("aeval rejects fixed-width nodes") {
  CHECK_THROWS_AS(aeval({}, bit_not(lit(1))), UnsupportedNode);
  CHECK_THROWS_AS(aeval({}, cast(Ty::U32, lit(1))), UnsupportedNode);
  CHECK_THROWS_AS(aeval({}, bit(BitOp::And, lit(1), lit(1))), UnsupportedNode);
}

TEST_CASE("beval examples") {
  CHECK(beval({}, parse_bexp("true || false")));
  CHECK_FALSE(beval({{"x", 1}}, parse_bexp("x <= 0")));
  CHECK(beval({{"x", 2}, {"y", 2}}, parse_bexp("x = y && !(x < y)")));
}

TEST_CASE("aeval and beval agree with the int64 oracle") {
  testing::ExprGen g(11);
  for (int i = 0; i < 1000; ++i) {
    Store s = g.store();
    AExpr e = g.aexp(5);
    CHECK(aeval(s, e) == testing::oracle_eval(s, e));
    BExpr b = g.bexp(3);
    CHECK(beval(s, b) == testing::oracle_beval(s, b));
  }
}

TEST_CASE("store is a total map with default zero") {
  Store a{{"x", 0}};
  Store b;
  CHECK(a == b);
  CHECK(a.get("nothing") == 0);
  b.set("y", 4);
  CHECK_FALSE(a == b);
}

TEST_CASE("store serialization") {
  Store s{{"b", -7}, {"a", Int("123456789012345678901234567890")}};
  CHECK(serialize(s) == "a=123456789012345678901234567890\nb=-7\n");
  CHECK(parse_store("// comment\n\nb=-7\na=123456789012345678901234567890\n") == s);
  CHECK(parse_store(serialize(s)) == s);
}

TEST_CASE("ceval_fuel examples") {
  CHECK(done_store(ceval_fuel(10, body("x := 1; x := x + 1"), {})) == Store{{"x", 2}});
  for (Fuel n : {0, 1, 10, 1000}) CHECK_FALSE(is_done(ceval_fuel(n, body("while true do skip done"), {})));

  Com countdown = body("while 1 <= x do x := x - 1 done");
  CHECK(done_store(ceval_fuel(5, countdown, {{"x", 3}})) == Store{{"x", 0}});
  CHECK_FALSE(is_done(ceval_fuel(3, countdown, {{"x", 3}})));
  // 3 iterations plus the failing exit test: 4 units is exactly enough.
  CHECK(is_done(ceval_fuel(4, countdown, {{"x", 3}})));
}

TEST_CASE("fuel is shared across sequential loops") {
  Com two = body("while 1 <= x do x := x - 1 done; while y <= 1 do y := y + 1 done");
  // First loop: 2 tests, second loop from y=0: 3 tests.
  CHECK_FALSE(is_done(ceval_fuel(4, two, {{"x", 1}})));
  CHECK(is_done(ceval_fuel(5, two, {{"x", 1}})));
}

TEST_CASE("step examples") {
  CHECK(std::holds_alternative<Terminal>(step(skip(), {})));

  auto r = step(assign("x", lit(1)), {});
  REQUIRE(std::holds_alternative<Next>(r));
  CHECK(std::get<Next>(r).com->kind == CKind::Skip);
  CHECK(std::get<Next>(r).store == Store{{"x", 1}});

  Com w = body("while x < 3 do x := x + 1 done");
  auto u = step(w, {});
  REQUIRE(std::holds_alternative<Next>(u));
  CHECK(equal(std::get<Next>(u).com, if_(w->cond, seq(w->first, w), skip())));
}

TEST_CASE("step: Seq(Skip, c) moves to c and If reduces in one step") {
  Com c = seq(skip(), assign("y", lit(2)));
  auto r = step(c, {});
  REQUIRE(std::holds_alternative<Next>(r));
  CHECK(equal(std::get<Next>(r).com, assign("y", lit(2))));

  auto i = step(body("if x = 0 then y := 1 else y := 2 end"), {});
  REQUIRE(std::holds_alternative<Next>(i));
  CHECK(equal(std::get<Next>(i).com, assign("y", lit(1))));
}

TEST_CASE("step is deterministic") {
  Com c = body("x := 1; while x < 4 do x := x * 2 done");
  Store s;
  for (int i = 0; i < 20; ++i) {
    auto a = step(c, s), b = step(c, s);
    if (std::holds_alternative<Terminal>(a)) {
      CHECK(std::holds_alternative<Terminal>(b));
      break;
    }
    CHECK(equal(std::get<Next>(a).com, std::get<Next>(b).com));
    CHECK(std::get<Next>(a).store == std::get<Next>(b).store);
    c = std::get<Next>(a).com;
    s = std::get<Next>(a).store;
  }
}

TEST_CASE("run_small examples") {
  CHECK(done_store(run_small(100, body("x := 1; x := x + 1"), {})) == Store{{"x", 2}});
  CHECK_FALSE(is_done(run_small(3, body("while true do skip done"), {})));
}

TEST_CASE("run_small: minimal step budget found by bisection") {
  // x := 1 ; x := x + 1: assign, Seq(Skip, _) elimination, assign.
  Com c = body("x := 1; x := x + 1");
  CHECK_FALSE(is_done(run_small(2, c, {})));
  CHECK(is_done(run_small(3, c, {})));
}

TEST_CASE("big-step and small-step agree on generated programs") {
  fuzz::GenSpec spec;
  for (std::size_t i = 0; i < 1000; ++i) {
    fuzz::Case c = fuzz::make_case(spec, i);
    Outcome big = ceval_fuel(c.fuel, c.program.body, c.store);
    Outcome small = run_small(10'000'000, c.program.body, c.store);
    REQUIRE(is_done(big));
    REQUIRE(is_done(small));
    CHECK(std::get<Done>(big).store == std::get<Done>(small).store);
  }
}

TEST_CASE("fuel monotonicity") {
  fuzz::GenSpec spec;
  spec.seed = 99;
  for (std::size_t i = 0; i < 200; ++i) {
    fuzz::Case c = fuzz::make_case(spec, i);
    // Find the least sufficient fuel, then check every larger budget.
    Fuel lo = 0;
    while (!is_done(ceval_fuel(lo, c.program.body, c.store))) ++lo;
    Store expected = std::get<Done>(ceval_fuel(lo, c.program.body, c.store)).store;
    for (Fuel f : {lo + 1, lo + 7, 2 * lo + 100})
      CHECK(std::get<Done>(ceval_fuel(f, c.program.body, c.store)).store == expected);
    if (lo > 0) CHECK_FALSE(is_done(ceval_fuel(lo - 1, c.program.body, c.store)));
  }
}

TEST_CASE("sequence association does not change outcomes") {
  testing::ExprGen g(3);
  for (int i = 0; i < 200; ++i) {
    Com a = assign("a", g.aexp(3)), b = assign("b", g.aexp(3));
    Com w = while_(lt(var("c"), lit(3)), assign("c", add(var("c"), lit(1))));
    Store s = g.store(3);
    for (Fuel f : {0, 1, 2, 5, 100}) {
      Outcome r1 = ceval_fuel(f, seq(a, seq(w, b)), s);
      Outcome r2 = ceval_fuel(f, seq(seq(a, w), b), s);
      CHECK(is_done(r1) == is_done(r2));
      if (is_done(r1)) CHECK(std::get<Done>(r1).store == std::get<Done>(r2).store);
    }
  }
}

TEST_CASE("aeval depends only on the free variables") {
  testing::ExprGen g(5);
  for (int i = 0; i < 300; ++i) {
    AExpr e = g.aexp(4);
    Store s = g.store();
    Store t = s;
    t.set("unrelated", 12345);
    CHECK(aeval(s, e) == aeval(t, e));
  }
}
