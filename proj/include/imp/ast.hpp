#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "imp/error.hpp"
#include "imp/int.hpp"

// Abstract syntax of imp. Nodes are immutable and shared; every rewrite builds
// new nodes and reuses unchanged subtrees. Structural equality (`equal`) ignores
// source positions and type annotations.

namespace imp {

enum class Ty { I32, U32 };
std::string_view to_string(Ty ty);

// ---------------------------------------------------------------------------
// Arithmetic expressions

enum class AKind { IntLit, Var, Neg, Bin, Bit, BitNot, Cast };
enum class BinOp { Add, Sub, Mul };
enum class BitOp { And, Or, Xor, Shl, Shr };

struct ANode;
using AExpr = std::shared_ptr<const ANode>;

struct ANode {
  AKind kind = AKind::IntLit;
  Int value;              // IntLit
  std::string name;       // Var
  BinOp bin = BinOp::Add; // Bin
  BitOp bit = BitOp::And; // Bit
  Ty cast = Ty::I32;      // Cast target
  AExpr lhs;              // operand of unary nodes, left child of binary nodes
  AExpr rhs;
  SourcePos pos;
  std::optional<Ty> ty;   // filled in by the type checker
};

AExpr lit(Int value, SourcePos pos = {});
AExpr var(std::string name, SourcePos pos = {});
AExpr neg(AExpr operand, SourcePos pos = {});
AExpr bin(BinOp op, AExpr lhs, AExpr rhs, SourcePos pos = {});
AExpr add(AExpr lhs, AExpr rhs);
AExpr sub(AExpr lhs, AExpr rhs);
AExpr mul(AExpr lhs, AExpr rhs);
AExpr bit(BitOp op, AExpr lhs, AExpr rhs, SourcePos pos = {});
AExpr bit_not(AExpr operand, SourcePos pos = {});
AExpr cast(Ty target, AExpr operand, SourcePos pos = {});

/// Integer constant that may be negative: negative values become Neg(IntLit).
AExpr make_int(const Int &value);

/// Value of an IntLit or Neg(IntLit), if `e` is one.
std::optional<Int> literal_value(const AExpr &e);

/// True when `e` uses only IntLit/Var/Neg/Add/Sub/Mul.
bool is_core(const AExpr &e);

// ---------------------------------------------------------------------------
// Boolean expressions and assertions
//
// Assertions share the representation of Boolean expressions; the Implies
// connective only appears in assertions (loop invariants, pre/postconditions).

enum class BKind { BoolLit, Cmp, Not, And, Or, Implies };
enum class CmpOp { Eq, Le, Lt };

struct BNode;
using BExpr = std::shared_ptr<const BNode>;
using Assertion = BExpr;

struct BNode {
  BKind kind = BKind::BoolLit;
  bool value = false;    // BoolLit
  CmpOp cmp = CmpOp::Eq; // Cmp
  AExpr alhs, arhs;      // Cmp operands
  BExpr lhs, rhs;        // Not uses lhs only
  SourcePos pos;
};

BExpr blit(bool value, SourcePos pos = {});
BExpr cmp(CmpOp op, AExpr lhs, AExpr rhs, SourcePos pos = {});
BExpr eq(AExpr lhs, AExpr rhs);
BExpr le(AExpr lhs, AExpr rhs);
BExpr lt(AExpr lhs, AExpr rhs);
BExpr bnot(BExpr operand, SourcePos pos = {});
BExpr band(BExpr lhs, BExpr rhs, SourcePos pos = {});
BExpr bor(BExpr lhs, BExpr rhs, SourcePos pos = {});
BExpr implies(BExpr lhs, BExpr rhs, SourcePos pos = {});

// ---------------------------------------------------------------------------
// Commands and programs

enum class CKind { Skip, Assign, Seq, If, While };

struct CNode;
using Com = std::shared_ptr<const CNode>;

struct CNode {
  CKind kind = CKind::Skip;
  std::string name;       // Assign target
  AExpr rhs;              // Assign
  BExpr cond;             // If / While
  Assertion invariant;    // While, may be null
  Com first, second;      // Seq parts, If branches, While body (first)
  SourcePos pos;
};

Com skip(SourcePos pos = {});
Com assign(std::string name, AExpr rhs, SourcePos pos = {});
Com seq(Com first, Com second, SourcePos pos = {});
/// Right-nested sequence of the given commands; Skip when empty.
Com seq(std::vector<Com> commands);
Com if_(BExpr cond, Com then_branch, Com else_branch, SourcePos pos = {});
Com while_(BExpr cond, Com body, Assertion invariant = nullptr, SourcePos pos = {});

enum class DeclTy { Untyped, I32, U32 };

struct Decl {
  std::string name;
  DeclTy type = DeclTy::Untyped;
  SourcePos pos;
};

struct Program {
  std::vector<Decl> decls;
  Com body;

  /// Typed mode is selected by the presence of declarations.
  bool typed() const { return !decls.empty(); }
};

// ---------------------------------------------------------------------------
// Structural queries

bool equal(const AExpr &a, const AExpr &b);
bool equal(const BExpr &a, const BExpr &b);
bool equal(const Com &a, const Com &b);
bool equal(const Program &a, const Program &b);

std::size_t node_count(const AExpr &e);
std::size_t node_count(const BExpr &b);
std::size_t node_count(const Com &c);

void free_vars(const AExpr &e, std::set<std::string> &out);
void free_vars(const BExpr &b, std::set<std::string> &out);
void free_vars(const Com &c, std::set<std::string> &out);
std::set<std::string> free_vars(const Program &p);

bool contains_while(const Com &c);
std::size_t count_while(const Com &c);

}  // namespace imp
