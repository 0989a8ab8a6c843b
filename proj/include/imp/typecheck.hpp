#pragma once

#include <map>
#include <string>
#include <variant>

#include "imp/ast.hpp"
#include "imp/semantics.hpp"

// Signed/unsigned 32-bit layer: type checking and the wrapping evaluator.

namespace imp {

using TypeEnv = std::map<std::string, Ty>;
using Store32 = std::map<std::string, Word32>;

/// A program whose expression nodes all carry a `ty` annotation.
struct TypedProgram {
  Program program;
  TypeEnv env;
};

/// Check a typed program. Untyped declarations (`var x;`) count as i32.
/// Throws TypeError or UndeclaredVariable at the first error.
TypedProgram typecheck(const Program &p);

/// Check an arbitrary program against an explicit environment. Used by the
/// backends to give untyped programs the all-i32 reading.
TypedProgram typecheck(const Program &p, const TypeEnv &env);

/// Type an expression has on its own, or nullopt when it contains only
/// literals and adopts the type of its context. Throws like typecheck.
std::optional<Ty> natural_type(const AExpr &e, const TypeEnv &env);

/// Type a comparison is evaluated at: the natural type of either side, i32
/// when both sides are literal-only.
Ty comparison_type(const BExpr &cmp, const TypeEnv &env);

/// Environment built from the declarations (untyped ones read as i32).
TypeEnv declared_env(const Program &p);

/// Environment mapping every variable of `p` to i32.
TypeEnv default_env(const Program &p);

/// Wrapping evaluation of an annotated expression. Unbound names read 0.
Word32 eval_fixed(const Store32 &s, const AExpr &e);
bool beval_fixed(const Store32 &s, const BExpr &b);

/// Equality of word stores as total maps (absent names read 0).
bool same_words(const Store32 &a, const Store32 &b);

struct Done32 {
  Store32 store;
  friend bool operator==(const Done32 &a, const Done32 &b) { return same_words(a.store, b.store); }
};
using Outcome32 = std::variant<Done32, OutOfFuel>;

/// Same control structure and fuel discipline as ceval_fuel, over words.
Outcome32 ceval_fixed(Fuel fuel, const Com &c, const Store32 &s);

/// Render a word according to its type (signed decimal for i32).
std::string render(Word32 w, Ty ty);

/// Parse a decimal (optionally negative) value and reduce it modulo 2^32.
Word32 parse_word(const std::string &text);

/// Reduce every binding modulo 2^32.
Store32 inject(const Store &s);

}  // namespace imp
