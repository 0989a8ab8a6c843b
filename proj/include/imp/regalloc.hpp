#pragma once

#include <string>
#include <vector>

#include "imp/ast.hpp"
#include "imp/semantics.hpp"

// Sethi-Ullman register allocation for expression trees.

namespace imp::regalloc {

enum class RegOpKind { Add, Sub, Mul, And, Or, Xor, Shl, Shr };

enum class RegInstrKind { LoadConst, LoadVar, Op, Spill, Reload };

struct RegInstr {
  RegInstrKind kind = RegInstrKind::LoadConst;
  RegOpKind op = RegOpKind::Add;
  int dst = 0;
  int lhs = 0;
  int rhs = 0;
  int src = 0;        // Spill
  Int value;          // LoadConst
  std::string name;   // LoadVar

  friend bool operator==(const RegInstr &, const RegInstr &) = default;
};

using RegCode = std::vector<RegInstr>;

RegInstr load_const(int dst, Int n);
RegInstr load_var(int dst, std::string x);
RegInstr op(RegOpKind kind, int dst, int lhs, int rhs);
RegInstr spill(int src);
RegInstr reload(int dst);

/// Ershov number: leaves need 1 register; an inner node needs the larger of
/// its children's needs, or one more when they are equal. Neg e counts as 0 - e.
int ershov(const AExpr &e);

/// Register code leaving the value of `e` in r0, using registers r0..r(k-1)
/// and a LIFO spill stack when the tree needs more than `k` registers.
///
/// Besides the core operators this also accepts the fixed-width layer so the
/// MIPS backend can use it for typed programs: bit operations map to their
/// RegOpKind, `~e` becomes `e ^ 0xFFFFFFFF` and casts are dropped (they do not
/// change the bit pattern). Such code is only meaningful modulo 2^32.
RegCode alloc_codegen(const AExpr &e, int k);

/// Execute register code over unbounded integers and return r0. Only the core
/// operators are supported. Throws MalformedCode on a register index outside
/// [0, k), a read of an unwritten register, or a Reload from an empty spill stack.
Int reg_exec(const RegCode &code, const Store &s, int k);

/// Largest number of simultaneously live registers (written and later read).
int max_live_registers(const RegCode &code);

std::size_t spill_count(const RegCode &code);

/// `LOADVAR r0 a`, `OP ADD r0 r0 r1`, `SPILL r0`, one per line.
std::string listing(const RegCode &code);

}  // namespace imp::regalloc
