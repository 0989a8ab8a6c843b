#pragma once

#include "imp/ast.hpp"
#include "imp/typecheck.hpp"

// AST rewrites selected by `-O n`:
//   0  no rewriting
//   1  const_fold, simplify_structural, simplify_bool
//   2  level 1 plus dead_code

namespace imp::opt {

/// Folds operators with literal operands and gathers the literal summands of
/// an additive chain (`a + 1 + 2` becomes `a + 3`). Bit operations and casts
/// are only traversed.
AExpr const_fold(const AExpr &e);

/// `e - e`, and the identities of 0 and 1 for `+`, `-` and `*`.
AExpr simplify_structural(const AExpr &e);

/// Both expression passes to a fixed point.
AExpr simplify_aexp(const AExpr &e);

/// Boolean dominance and identity laws plus literal comparison folding.
/// Arithmetic operands are simplified first. With an environment the
/// comparison is folded at the type it had before its operands were
/// rewritten, using 32-bit wrapping values.
BExpr simplify_bool(const BExpr &b, const TypeEnv *env = nullptr);

/// Removes branches and loops with literal conditions and Skip in sequences.
/// Sequences come out right-nested.
Com dead_code(const Com &c);

/// Applies the rewrites of `level` (0, 1 or 2) to a fixed point. Loop
/// invariants are left as written. Typed programs are type checked first.
Program optimize(const Program &p, int level);

}  // namespace imp::opt
