#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "imp/ast.hpp"

// A MIPS-3k subset: textual assembly, code generation from imp, and an
// instruction-level simulator (no pipeline, no delay slots).

namespace imp::mips {

enum class Mnemonic {
  Label,  // pseudo entry marking a label definition
  Li, Lui, Ori, Lw, Sw, Addu, Subu, Addiu, And, Or, Xor, Nor,
  Sll, Srl, Sllv, Srlv, Slt, Sltu, Beq, Bne, J, Break,
};

std::string_view to_string(Mnemonic m);

/// Register numbers follow the MIPS convention ($zero = 0, $t0 = 8, $sp = 29, ...).
using Reg = int;
inline constexpr Reg kZero = 0, kAt = 1, kV0 = 2, kT0 = 8, kT8 = 24, kT9 = 25, kSp = 29, kRa = 31;
inline constexpr Reg t(int i) { return i < 8 ? kT0 + i : kT8 + (i - 8); }
inline constexpr Reg s(int i) { return 16 + i; }

/// Canonical name ("$t0"); throws for registers outside the supported subset.
std::string reg_name(Reg r);

/// One line of the text segment.
///
/// Operand use by mnemonic:
///   li/lui/ori/addiu   rt, [rs,] imm
///   lw/sw              rt, label        (absolute data address)
///                      rt, imm(rs)      (when `label` is empty)
///   addu..sltu         rd, rs, rt
///   sll/srl            rd, rt, imm (shift amount)
///   sllv/srlv          rd, rt, rs
///   beq/bne            rs, rt, label
///   j                  label
struct Instr {
  Mnemonic op = Mnemonic::Break;
  Reg rd = 0, rs = 0, rt = 0;
  std::int64_t imm = 0;
  std::string label;

  friend bool operator==(const Instr &, const Instr &) = default;
};

struct DataWord {
  std::string label;
  Word32 init = 0;
  friend bool operator==(const DataWord &, const DataWord &) = default;
};

struct MipsProgram {
  std::vector<DataWord> data;
  std::vector<Instr> text;
  friend bool operator==(const MipsProgram &, const MipsProgram &) = default;
};

/// Data label holding imp variable `name`.
std::string var_label(const std::string &name);

// Builders.
Instr label(std::string name);
Instr li(Reg rt, std::int64_t imm);
Instr lui(Reg rt, std::int64_t imm);
Instr ori(Reg rt, Reg rs, std::int64_t imm);
Instr addiu(Reg rt, Reg rs, std::int64_t imm);
Instr lw(Reg rt, std::string data_label);
Instr lw(Reg rt, std::int64_t offset, Reg base);
Instr sw(Reg rt, std::string data_label);
Instr sw(Reg rt, std::int64_t offset, Reg base);
Instr rrr(Mnemonic op, Reg rd, Reg rs, Reg rt);
Instr shift(Mnemonic op, Reg rd, Reg rt, std::int64_t shamt);
Instr sllv(Reg rd, Reg rt, Reg rs);
Instr srlv(Reg rd, Reg rt, Reg rs);
Instr beq(Reg rs, Reg rt, std::string target);
Instr bne(Reg rs, Reg rt, std::string target);
Instr j(std::string target);
Instr brk();

/// Load an arbitrary 32-bit constant: `li` when it fits a signed 16-bit
/// immediate, `lui`/`ori` otherwise.
std::vector<Instr> load_immediate(Reg rt, Word32 value);

// ---------------------------------------------------------------------------
// Code generation

enum class Strategy { Naive, RegAlloc };

struct CodegenOptions {
  Strategy strategy = Strategy::Naive;
  bool emulate_mul = false;
};

/// Raised when a program multiplies and multiplication emulation is off.
class MulNotSupported : public Error {
public:
  explicit MulNotSupported(std::vector<SourcePos> positions);
  const std::vector<SourcePos> &positions() const { return positions_; }

private:
  std::vector<SourcePos> positions_;
};

/// Lower a program. Typed programs are type checked first (TypeError on
/// failure); untyped programs are compiled as if every variable were i32.
MipsProgram codegen(const Program &p, const CodegenOptions &opts);

/// Shift-and-add loop computing dst = lhs * rhs mod 2^32. Registers dst, lhs
/// and rhs must be distinct and must not be $at, $t8 or $t9. Clobbers only dst,
/// $t8, $t9 and $at. `label_prefix` must be unique within the program.
std::vector<Instr> emit_mul_emulation(Reg dst, Reg lhs, Reg rhs, const std::string &label_prefix);

// ---------------------------------------------------------------------------
// Assembly text

std::string emit_asm(const MipsProgram &prog);
/// Throws AsmError(line, reason).
MipsProgram parse_asm(std::string_view src);

// ---------------------------------------------------------------------------
// Simulation

inline constexpr Word32 kDataBase = 0x10010000u;
inline constexpr Word32 kStackTop = 0x7FFFFFFCu;

struct Halted {
  std::map<std::string, Word32> vars;  // keyed by imp variable name
};
struct BudgetExhausted {};
struct Trap {
  std::string reason;
};
using SimOutcome = std::variant<Halted, BudgetExhausted, Trap>;

/// Full machine state, exposed for tests that inspect registers.
struct MipsState {
  std::array<Word32, 32> regs{};
  std::map<Word32, Word32> mem;
  std::size_t pc = 0;
  bool halted = false;
};

/// Run from `main` with $sp at kStackTop. `init` overrides the initial words of
/// the named imp variables. Each executed instruction costs one budget unit.
SimOutcome simulate(const MipsProgram &prog, const std::map<std::string, Word32> &init,
                    std::uint64_t budget);

/// Machine state simulate starts from: data words laid out from kDataBase in
/// declaration order (overridden by `init`), $sp = kStackTop, pc at `main`.
MipsState initial_state(const MipsProgram &prog, const std::map<std::string, Word32> &init);

/// Lower-level entry used by simulate: runs `prog` on `state` until `break`, a
/// trap, or the budget runs out. Returns nullopt on a clean halt.
std::optional<SimOutcome> run_machine(const MipsProgram &prog, MipsState &state,
                                      std::uint64_t budget);

/// Number of real instructions (labels excluded).
std::size_t instruction_count(const MipsProgram &prog);

}  // namespace imp::mips
