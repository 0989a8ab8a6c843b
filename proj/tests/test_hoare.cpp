#include <doctest.h>

#include "imp/error.hpp"
#include "imp/frontend.hpp"
#include "imp/hoare.hpp"
#include "support.hpp"

using namespace imp;
using namespace imp::hoare;

namespace {

Com body(const char *src) { return parse_program(src).body; }
Assertion A(const char *src) { return parse_assertion(src); }

const char *kCounting = "while x <= 9 invariant { 0 <= x && x <= 10 } do x := x + 1 done";

bool is_valid(const BoundedResult &r) { return std::holds_alternative<Valid>(r); }

}  // namespace

TEST_CASE("subst examples") {
  CHECK(equal(subst(bnot(le(var("x"), lit(0))), "x", add(var("x"), lit(1))),
              bnot(le(add(var("x"), lit(1)), lit(0)))));
  CHECK(equal(subst(A("y = 2"), "x", lit(7)), A("y = 2")));
  CHECK(equal(subst(A("x = 1 -> x * y < x"), "x", var("z")), A("z = 1 -> z * y < z")));
}

TEST_CASE("substitution lemma") {
  testing::ExprGen g(41, {"x", "y", "z"});
  for (int i = 0; i < 500; ++i) {
    Assertion a = g.bexp(3);
    if (g.pick(3) == 0) a = implies(a, g.bexp(2));
    AExpr e = g.aexp(3);
    Store s = g.store();
    Store updated = s;
    updated.set("x", aeval(s, e));
    CHECK(beval(s, subst(a, "x", e)) == beval(updated, a));
  }
}

TEST_CASE("wlp of skip and assignment") {
  WlpResult r = wlp(skip(), A("x = 1"));
  CHECK(equal(r.pre, A("x = 1")));
  CHECK(r.side.empty());

  WlpResult a = wlp(body("x := x + 1"), A("!(x <= 0)"));
  CHECK(equal(a.pre, A("!(x + 1 <= 0)")));
  CHECK(a.side.empty());
}

TEST_CASE("wlp of a conditional") {
  WlpResult r = wlp(body("if x < 0 then y := 0 - x else y := x end"), A("0 <= y"));
  CHECK(equal(r.pre, A("(x < 0 -> 0 <= 0 - x) && (!(x < 0) -> 0 <= x)")));
}

TEST_CASE("wlp of the counting loop") {
  WlpResult r = wlp(body(kCounting), A("x = 10"));
  CHECK(equal(r.pre, A("0 <= x && x <= 10")));
  REQUIRE(r.side.size() == 2);
  CHECK(r.side[0].origin == VcOrigin::Preservation);
  CHECK(equal(r.side[0].formula, A("0 <= x && x <= 10 && x <= 9 -> 0 <= x + 1 && x + 1 <= 10")));
  CHECK(r.side[1].origin == VcOrigin::Exit);
  CHECK(equal(r.side[1].formula, A("0 <= x && x <= 10 && !(x <= 9) -> x = 10")));
  for (const auto &vc : r.side) CHECK(is_valid(bounded_check(vc, 16)));
}

TEST_CASE("wlp requires invariants") {
  try {
    wlp(body("x := 0;\nwhile x < 3 do x := x + 1 done"), A("true"));
    FAIL("expected MissingInvariant");
  } catch (const MissingInvariant &e) {
    CHECK(e.pos().line == 2);
  }
}

TEST_CASE("vcgen examples") {
  auto v = vcgen({A("true"), skip(), A("true")});
  REQUIRE(v.size() == 1);
  CHECK(v[0].origin == VcOrigin::Top);
  CHECK(equal(v[0].formula, A("true -> true")));

  auto w = vcgen({A("x = 0"), body("x := x + 1"), A("x = 1")});
  REQUIRE(w.size() == 1);
  CHECK(equal(w[0].formula, A("x = 0 -> x + 1 = 1")));
}

TEST_CASE("counting-loop triple gives three valid conditions") {
  auto vcs = vcgen({A("x = 0"), body(kCounting), A("x = 10")});
  REQUIRE(vcs.size() == 3);
  CHECK(vcs[0].origin == VcOrigin::Top);
  CHECK(vcs[1].origin == VcOrigin::Preservation);
  CHECK(vcs[2].origin == VcOrigin::Exit);
  for (const auto &vc : vcs) CHECK(is_valid(bounded_check(vc, 16)));
}

TEST_CASE("a weakened invariant fails on the exit condition at x = 11") {
  auto vcs = vcgen({A("x = 0"), body("while x <= 9 invariant { 0 <= x } do x := x + 1 done"), A("x = 10")});
  REQUIRE(vcs.size() == 3);
  CHECK(is_valid(bounded_check(vcs[0], 16)));
  CHECK(is_valid(bounded_check(vcs[1], 16)));
  auto r = bounded_check(vcs[2], 16);
  REQUIRE(std::holds_alternative<Counterexample>(r));
  CHECK(std::get<Counterexample>(r).store == Store{{"x", 11}});
}

TEST_CASE("vcgen size: one plus two per loop") {
  auto vcs = vcgen({A("true"),
                    body("while a < 3 invariant { true } do a := a + 1 done;"
                         "while b < 3 invariant { true } do"
                         "  while c < 3 invariant { true } do c := c + 1 done;"
                         "  b := b + 1 done"),
                    A("true")});
  CHECK(vcs.size() == 7);
  // Seq side conditions: the first loop's, then the second's; nested ones after their parent's pair.
  CHECK(vcs[1].origin == VcOrigin::Preservation);
  CHECK(vcs[2].origin == VcOrigin::Exit);
  CHECK(vcs[3].origin == VcOrigin::Preservation);
  CHECK(vcs[4].origin == VcOrigin::Exit);
  CHECK(vcs[5].origin == VcOrigin::Preservation);
  CHECK(vcs[6].origin == VcOrigin::Exit);
}

TEST_CASE("emit_smtlib examples") {
  CHECK(emit_smtlib({VcOrigin::Top, A("true -> true")}) ==
        "(set-logic QF_LIA)\n(assert (not (=> true true)))\n(check-sat)\n");
  CHECK(emit_smtlib({VcOrigin::Top, A("x = 0 -> x + 1 = 1")}) ==
        "(set-logic QF_LIA)\n(declare-const x Int)\n(assert (not (=> (= x 0) (= (+ x 1) 1))))\n(check-sat)\n");
}

TEST_CASE("emit_smtlib: logic selection, sorted declarations, quoting") {
  std::string lin = emit_smtlib({VcOrigin::Top, A("2 * y <= x * 3")});
  CHECK(lin.rfind("(set-logic QF_LIA)\n(declare-const x Int)\n(declare-const y Int)\n", 0) == 0);
  CHECK(emit_smtlib({VcOrigin::Top, A("x * y = 0")}).rfind("(set-logic QF_NIA)", 0) == 0);
  std::string q = emit_smtlib({VcOrigin::Top, A("and < -or")});
  CHECK(q.find("(declare-const |and| Int)") != std::string::npos);
  CHECK(q.find("(< |and| (- |or|))") != std::string::npos);
}

TEST_CASE("bounded_check examples") {
  CHECK(is_valid(bounded_check({VcOrigin::Top, A("true -> true")}, 4)));
  auto r = bounded_check({VcOrigin::Top, A("x <= 0")}, 4);
  REQUIRE(std::holds_alternative<Counterexample>(r));
  CHECK(std::get<Counterexample>(r).store == Store{{"x", 1}});
}

TEST_CASE("bounded_check enumeration order: first variable most significant, ascending") {
  auto r = bounded_check({VcOrigin::Top, A("!(b = 1 && 0 < a)")}, 2);
  REQUIRE(std::holds_alternative<Counterexample>(r));
  CHECK(std::get<Counterexample>(r).store == Store{{"a", 1}, {"b", 1}});
  auto s = bounded_check({VcOrigin::Top, A("a < 0 || b < 2")}, 3);
  REQUIRE(std::holds_alternative<Counterexample>(s));
  CHECK(std::get<Counterexample>(s).store == Store{{"a", 0}, {"b", 2}});
}

TEST_CASE("counterexamples falsify their formula") {
  testing::ExprGen g(8, {"x", "y"});
  for (int i = 0; i < 200; ++i) {
    VerificationCondition vc{VcOrigin::Top, g.bexp(3)};
    auto r = bounded_check(vc, 3);
    if (auto *c = std::get_if<Counterexample>(&r)) CHECK_FALSE(beval(c->store, vc.formula));
  }
}

TEST_CASE("bounded_check cap") {
  CHECK_THROWS_AS(bounded_check({VcOrigin::Top, A("a + b + c + d + e = 0 -> true")}, 30), BudgetExceeded);
  CHECK_THROWS_AS(bounded_check({VcOrigin::Top, A("a = b")}, 10, 100), BudgetExceeded);
  CHECK(is_valid(bounded_check({VcOrigin::Top, A("a = a")}, 10, 21)));
}

TEST_CASE("loop-free soundness on a small box") {
  testing::ExprGen g(77, {"x", "y"});
  for (int i = 0; i < 100; ++i) {
    Com c = seq(assign("x", g.aexp(2)), if_(g.bexp(2), assign("y", g.aexp(2)), assign("x", g.aexp(2))));
    Assertion q = g.bexp(2);
    Assertion w = wlp(c, q).pre;
    for (int x = -3; x <= 3; ++x)
      for (int y = -3; y <= 3; ++y) {
        Store s{{"x", x}, {"y", y}};
        if (!beval(s, w)) continue;
        Outcome o = ceval_fuel(1, c, s);
        REQUIRE(is_done(o));
        CHECK(beval(std::get<Done>(o).store, q));
      }
  }
}

TEST_CASE("wlp is monotone in the postcondition") {
  testing::ExprGen g(91, {"x", "y"});
  for (int i = 0; i < 100; ++i) {
    Com c = seq(assign("y", g.aexp(2)), assign("x", add(var("x"), var("y"))));
    Assertion q1 = g.bexp(2);
    Assertion q2 = bor(q1, g.bexp(2));
    CHECK(is_valid(bounded_check({VcOrigin::Top, implies(wlp(c, q1).pre, wlp(c, q2).pre)}, 3)));
  }
}
