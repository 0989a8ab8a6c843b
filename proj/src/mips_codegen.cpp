#include "imp/mips.hpp"
#include "imp/regalloc.hpp"
#include "imp/typecheck.hpp"

namespace imp::mips {

std::string var_label(const std::string &name) { return "var_" + name; }

MulNotSupported::MulNotSupported(std::vector<SourcePos> positions)
    : Error("multiplication is not supported by the target (use --emulate-mul)",
            positions.empty() ? SourcePos{} : positions.front()),
      positions_(std::move(positions)) {}

std::vector<Instr> load_immediate(Reg rt, Word32 value) {
  std::int32_t sv = as_signed(value);
  if (sv >= -32768 && sv <= 32767) return {li(rt, sv)};
  std::vector<Instr> out{lui(rt, value >> 16)};
  if ((value & 0xFFFFu) != 0) out.push_back(ori(rt, rt, value & 0xFFFFu));
  return out;
}

std::vector<Instr> emit_mul_emulation(Reg dst, Reg lhs, Reg rhs, const std::string &prefix) {
  const std::string loop = prefix + "_loop", skip = prefix + "_skip", done = prefix + "_done";
  return {
      rrr(Mnemonic::Addu, kT8, lhs, kZero),  // multiplicand, shifted left each round
      rrr(Mnemonic::Addu, kT9, rhs, kZero),  // multiplier, shifted right each round
      rrr(Mnemonic::Addu, dst, kZero, kZero),
      label(loop),
      beq(kT9, kZero, done),
      shift(Mnemonic::Sll, kAt, kT9, 31),  // isolate the low bit
      beq(kAt, kZero, skip),
      rrr(Mnemonic::Addu, dst, dst, kT8),
      label(skip),
      shift(Mnemonic::Sll, kT8, kT8, 1),
      shift(Mnemonic::Srl, kT9, kT9, 1),
      j(loop),
      label(done),
  };
}

namespace {

void collect_muls(const AExpr &e, std::vector<SourcePos> &out) {
  if (!e) return;
  collect_muls(e->lhs, out);
  if (e->kind == AKind::Bin && e->bin == BinOp::Mul) out.push_back(e->pos);
  collect_muls(e->rhs, out);
}

void collect_muls(const BExpr &b, std::vector<SourcePos> &out) {
  if (!b) return;
  collect_muls(b->alhs, out);
  collect_muls(b->arhs, out);
  collect_muls(b->lhs, out);
  collect_muls(b->rhs, out);
}

void collect_muls(const Com &c, std::vector<SourcePos> &out) {
  if (!c) return;
  collect_muls(c->rhs, out);
  collect_muls(c->cond, out);
  collect_muls(c->first, out);
  collect_muls(c->second, out);
}

class Emitter {
public:
  explicit Emitter(const CodegenOptions &opts) : opts_(opts) {}

  std::vector<Instr> take() { return std::move(out_); }

  void com(const Com &c) {
    switch (c->kind) {
    case CKind::Skip:
      return;
    case CKind::Assign:
      expr_to_t0(c->rhs);
      emit(sw(kT0, var_label(c->name)));
      return;
    case CKind::Seq:
      com(c->first);
      com(c->second);
      return;
    case CKind::If: {
      std::string else_l = fresh("L"), end_l = fresh("L");
      branch(c->cond, false, else_l);
      com(c->first);
      emit(j(end_l));
      emit(label(else_l));
      com(c->second);
      emit(label(end_l));
      return;
    }
    case CKind::While: {
      std::string top = fresh("L"), exit = fresh("L");
      emit(label(top));
      branch(c->cond, false, exit);
      com(c->first);
      emit(j(top));
      emit(label(exit));
      return;
    }
    }
  }

private:
  void emit(Instr i) { out_.push_back(std::move(i)); }
  void emit(const std::vector<Instr> &is) { out_.insert(out_.end(), is.begin(), is.end()); }

  std::string fresh(const char *prefix) { return prefix + std::to_string(next_label_++); }

  void push(Reg r) {
    emit(addiu(kSp, kSp, -4));
    emit(sw(r, 0, kSp));
  }

  void pop(Reg r) {
    emit(lw(r, 0, kSp));
    emit(addiu(kSp, kSp, 4));
  }

  // dst := lhs <op> rhs for every binary operator, multiplication included.
  void binary(Reg dst, Reg lhs, Reg rhs, const AExpr &node) {
    if (node->kind == AKind::Bin) {
      switch (node->bin) {
      case BinOp::Add: emit(rrr(Mnemonic::Addu, dst, lhs, rhs)); return;
      case BinOp::Sub: emit(rrr(Mnemonic::Subu, dst, lhs, rhs)); return;
      case BinOp::Mul: multiply(dst, lhs, rhs); return;
      }
    }
    switch (node->bit) {
    case BitOp::And: emit(rrr(Mnemonic::And, dst, lhs, rhs)); return;
    case BitOp::Or: emit(rrr(Mnemonic::Or, dst, lhs, rhs)); return;
    case BitOp::Xor: emit(rrr(Mnemonic::Xor, dst, lhs, rhs)); return;
    case BitOp::Shl: emit(sllv(dst, lhs, rhs)); return;
    case BitOp::Shr: emit(srlv(dst, lhs, rhs)); return;
    }
  }

  void multiply(Reg dst, Reg lhs, Reg rhs) {
    if (!opts_.emulate_mul) throw MulNotSupported({});
    emit(emit_mul_emulation(kV0, lhs, rhs, fresh("mul")));
    if (dst != kV0) emit(rrr(Mnemonic::Addu, dst, kV0, kZero));
  }

  // Naive strategy: postorder evaluation on the $sp stack, one push per node,
  // mirroring the stack-machine compiler.
  void naive(const AExpr &e) {
    switch (e->kind) {
    case AKind::IntLit:
      emit(load_immediate(kT0, wrap32(e->value)));
      push(kT0);
      return;
    case AKind::Var:
      emit(lw(kT0, var_label(e->name)));
      push(kT0);
      return;
    case AKind::Cast:
      naive(e->lhs);
      return;
    case AKind::BitNot:
      naive(e->lhs);
      pop(kT0);
      emit(rrr(Mnemonic::Nor, kT0, kT0, kZero));
      push(kT0);
      return;
    case AKind::Neg:
      emit(li(kT0, 0));
      push(kT0);
      naive(e->lhs);
      pop(kT1);
      pop(kT0);
      emit(rrr(Mnemonic::Subu, kT0, kT0, kT1));
      push(kT0);
      return;
    case AKind::Bin:
    case AKind::Bit:
      naive(e->lhs);
      naive(e->rhs);
      pop(kT1);
      pop(kT0);
      binary(kT0, kT0, kT1, e);
      push(kT0);
      return;
    }
  }

  void lower(const regalloc::RegCode &code) {
    using regalloc::RegInstrKind;
    using regalloc::RegOpKind;
    for (const auto &in : code) {
      switch (in.kind) {
      case RegInstrKind::LoadConst:
        emit(load_immediate(t(in.dst), wrap32(in.value)));
        break;
      case RegInstrKind::LoadVar:
        emit(lw(t(in.dst), var_label(in.name)));
        break;
      case RegInstrKind::Spill:
        push(t(in.src));
        break;
      case RegInstrKind::Reload:
        pop(t(in.dst));
        break;
      case RegInstrKind::Op: {
        Reg d = t(in.dst), a = t(in.lhs), b = t(in.rhs);
        switch (in.op) {
        case RegOpKind::Add: emit(rrr(Mnemonic::Addu, d, a, b)); break;
        case RegOpKind::Sub: emit(rrr(Mnemonic::Subu, d, a, b)); break;
        case RegOpKind::Mul: multiply(d, a, b); break;
        case RegOpKind::And: emit(rrr(Mnemonic::And, d, a, b)); break;
        case RegOpKind::Or: emit(rrr(Mnemonic::Or, d, a, b)); break;
        case RegOpKind::Xor: emit(rrr(Mnemonic::Xor, d, a, b)); break;
        case RegOpKind::Shl: emit(sllv(d, a, b)); break;
        case RegOpKind::Shr: emit(srlv(d, a, b)); break;
        }
        break;
      }
      }
    }
  }

  void expr_to_t0(const AExpr &e) {
    if (opts_.strategy == Strategy::Naive) {
      naive(e);
      pop(kT0);
    } else {
      lower(regalloc::alloc_codegen(e, kRegisters));
    }
  }

  // Leaves lhs in $t0 and rhs in $t1.
  void operands(const AExpr &l, const AExpr &r) {
    if (opts_.strategy == Strategy::Naive) {
      naive(l);
      naive(r);
      pop(kT1);
      pop(kT0);
    } else {
      expr_to_t0(l);
      push(kT0);
      expr_to_t0(r);
      emit(rrr(Mnemonic::Addu, kT1, kT0, kZero));
      pop(kT0);
    }
  }

  // Falls through when `b` differs from `cond`, jumps to `target` otherwise.
  void branch(const BExpr &b, bool cond, const std::string &target) {
    switch (b->kind) {
    case BKind::BoolLit:
      if (b->value == cond) emit(j(target));
      return;
    case BKind::Cmp: {
      operands(b->alhs, b->arhs);
      bool is_unsigned = b->alhs->ty.value_or(Ty::I32) == Ty::U32;
      Mnemonic slt = is_unsigned ? Mnemonic::Sltu : Mnemonic::Slt;
      switch (b->cmp) {
      case CmpOp::Eq:
        emit(rrr(Mnemonic::Subu, kAt, kT0, kT1));
        emit(cond ? beq(kAt, kZero, target) : bne(kAt, kZero, target));
        return;
      case CmpOp::Le:  // x <= y  iff  !(y < x)
        emit(rrr(slt, kAt, kT1, kT0));
        emit(cond ? beq(kAt, kZero, target) : bne(kAt, kZero, target));
        return;
      case CmpOp::Lt:
        emit(rrr(slt, kAt, kT0, kT1));
        emit(cond ? bne(kAt, kZero, target) : beq(kAt, kZero, target));
        return;
      }
      return;
    }
    case BKind::Not:
      branch(b->lhs, !cond, target);
      return;
    case BKind::And:
      if (cond) {
        std::string skip = fresh("L");
        branch(b->lhs, false, skip);
        branch(b->rhs, true, target);
        emit(label(skip));
      } else {
        branch(b->lhs, false, target);
        branch(b->rhs, false, target);
      }
      return;
    case BKind::Or:
      if (cond) {
        branch(b->lhs, true, target);
        branch(b->rhs, true, target);
      } else {
        std::string skip = fresh("L");
        branch(b->lhs, true, skip);
        branch(b->rhs, false, target);
        emit(label(skip));
      }
      return;
    case BKind::Implies:
      throw UnsupportedNode("implication is only meaningful in assertions", b->pos);
    }
  }

  static constexpr int kRegisters = 8;  // $t0..$t7
  static constexpr Reg kT1 = kT0 + 1;

  const CodegenOptions &opts_;
  std::vector<Instr> out_;
  int next_label_ = 0;
};

}  // namespace

MipsProgram codegen(const Program &p, const CodegenOptions &opts) {
  if (!opts.emulate_mul) {
    std::vector<SourcePos> muls;
    collect_muls(p.body, muls);
    if (!muls.empty()) throw MulNotSupported(std::move(muls));
  }
  TypedProgram tp = p.typed() ? typecheck(p) : typecheck(p, default_env(p));

  MipsProgram out;
  for (const auto &v : free_vars(p)) out.data.push_back({var_label(v), 0});

  Emitter em(opts);
  em.com(tp.program.body);
  out.text.push_back(label("main"));
  for (auto &i : em.take()) out.text.push_back(std::move(i));
  out.text.push_back(brk());
  return out;
}

std::size_t instruction_count(const MipsProgram &prog) {
  std::size_t n = 0;
  for (const auto &i : prog.text)
    if (i.op != Mnemonic::Label) ++n;
  return n;
}

}  // namespace imp::mips
