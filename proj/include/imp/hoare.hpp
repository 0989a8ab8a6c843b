#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "imp/ast.hpp"
#include "imp/semantics.hpp"

namespace imp::hoare {

struct HoareTriple {
  Assertion pre;
  Com com;
  Assertion post;
};

enum class VcOrigin { Init, Preservation, Exit, Top };
std::string_view to_string(VcOrigin origin);

struct VerificationCondition {
  VcOrigin origin = VcOrigin::Top;
  Assertion formula;
};

/// Replace every occurrence of variable `x` by `e`. Assertions are
/// quantifier-free, so no capture can occur.
Assertion subst(const Assertion &a, const std::string &x, const AExpr &e);
AExpr subst(const AExpr &a, const std::string &x, const AExpr &e);

struct WlpResult {
  Assertion pre;
  std::vector<VerificationCondition> side;
};

/// Weakest liberal precondition. Loops use their invariant annotation and
/// contribute a preservation and an exit condition. Throws MissingInvariant.
WlpResult wlp(const Com &c, const Assertion &q);

/// `[top: pre -> wlp(com, post)] ++ side conditions`.
std::vector<VerificationCondition> vcgen(const HoareTriple &t);

/// SMT-LIB2 script whose result is `unsat` iff the condition is valid over the
/// integers.
std::string emit_smtlib(const VerificationCondition &vc);

struct Valid {};
struct Counterexample {
  Store store;
};
using BoundedResult = std::variant<Valid, Counterexample>;

constexpr std::uint64_t kDefaultStoreCap = 10'000'000;

/// Exhaustively evaluate the formula on every store assigning each free
/// variable a value in [-bound, bound]. Variables are enumerated in
/// lexicographic order with the first variable most significant, values
/// ascending, and the first falsifying store is returned. Validity is only
/// established over that box. Throws BudgetExceeded when the box holds more
/// than `cap` stores.
BoundedResult bounded_check(const VerificationCondition &vc, std::int64_t bound,
                            std::uint64_t cap = kDefaultStoreCap);

}  // namespace imp::hoare
