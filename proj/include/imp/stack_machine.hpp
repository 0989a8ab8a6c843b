#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "imp/ast.hpp"
#include "imp/semantics.hpp"

namespace imp::stack {

enum class Opcode {
  Iconst,   // push n
  Ivar,     // push value of x
  Isetvar,  // pop into x
  Iadd,
  Isub,
  Imul,
  Ibranch,  // unconditional, pc := pc + 1 + delta
  Ibeq,     // pop n2, n1; branch when n1 = n2
  Ibne,
  Ible,     // branch when n1 <= n2
  Ibgt,     // branch when n1 > n2
  Ihalt,
};

struct Instr {
  Opcode op = Opcode::Ihalt;
  Int n;               // Iconst
  std::string x;       // Ivar, Isetvar
  std::int64_t delta = 0;  // branches

  friend bool operator==(const Instr &, const Instr &) = default;
};

using Code = std::vector<Instr>;

Instr iconst(Int n);
Instr ivar(std::string x);
Instr isetvar(std::string x);
Instr iadd();
Instr isub();
Instr imul();
Instr ibranch(std::int64_t delta);
Instr ibeq(std::int64_t delta);
Instr ibne(std::int64_t delta);
Instr ible(std::int64_t delta);
Instr ibgt(std::int64_t delta);
Instr ihalt();

Code compile_aexp(const AExpr &e);
/// Code that falls through when `b` evaluates to `!cond` and jumps `ofs`
/// instructions past its own end when `b` evaluates to `cond`.
Code compile_bexp(const BExpr &b, bool cond, std::int64_t ofs);
Code compile_com(const Com &c);
Code compile_program(const Program &p);

/// Every branch target lies in [0, code.size()].
bool branches_in_bounds(const Code &code);

struct MachineError {
  std::string reason;
  std::size_t pc = 0;
  friend bool operator==(const MachineError &, const MachineError &) = default;
};

using VmOutcome = std::variant<Done, OutOfFuel, MachineError>;

/// Run from pc 0 with an empty stack. Each executed instruction costs one unit.
VmOutcome vm_exec(std::uint64_t fuel, const Code &code, const Store &s0);

/// `ICONST 5`, `IBRANCH -7`, `ISETVAR x`, one per line.
std::string listing(const Code &code);
std::string_view mnemonic(Opcode op);

}  // namespace imp::stack
