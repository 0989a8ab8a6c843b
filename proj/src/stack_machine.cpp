#include "imp/stack_machine.hpp"

namespace imp::stack {

namespace {

Instr make(Opcode op) {
  Instr i;
  i.op = op;
  return i;
}

Instr branch(Opcode op, std::int64_t delta) {
  Instr i = make(op);
  i.delta = delta;
  return i;
}

void append(Code &dst, const Code &src) { dst.insert(dst.end(), src.begin(), src.end()); }

std::int64_t len(const Code &c) { return static_cast<std::int64_t>(c.size()); }

bool is_branch(Opcode op) {
  return op == Opcode::Ibranch || op == Opcode::Ibeq || op == Opcode::Ibne ||
         op == Opcode::Ible || op == Opcode::Ibgt;
}

}  // namespace

Instr iconst(Int n) {
  Instr i = make(Opcode::Iconst);
  i.n = std::move(n);
  return i;
}
Instr ivar(std::string x) {
  Instr i = make(Opcode::Ivar);
  i.x = std::move(x);
  return i;
}
Instr isetvar(std::string x) {
  Instr i = make(Opcode::Isetvar);
  i.x = std::move(x);
  return i;
}
Instr iadd() { return make(Opcode::Iadd); }
Instr isub() { return make(Opcode::Isub); }
Instr imul() { return make(Opcode::Imul); }
Instr ibranch(std::int64_t d) { return branch(Opcode::Ibranch, d); }
Instr ibeq(std::int64_t d) { return branch(Opcode::Ibeq, d); }
Instr ibne(std::int64_t d) { return branch(Opcode::Ibne, d); }
Instr ible(std::int64_t d) { return branch(Opcode::Ible, d); }
Instr ibgt(std::int64_t d) { return branch(Opcode::Ibgt, d); }
Instr ihalt() { return make(Opcode::Ihalt); }

Code compile_aexp(const AExpr &e) {
  Code out;
  switch (e->kind) {
  case AKind::IntLit:
    out.push_back(iconst(e->value));
    return out;
  case AKind::Var:
    out.push_back(ivar(e->name));
    return out;
  case AKind::Neg:
    out.push_back(iconst(0));
    append(out, compile_aexp(e->lhs));
    out.push_back(isub());
    return out;
  case AKind::Bin:
    append(out, compile_aexp(e->lhs));
    append(out, compile_aexp(e->rhs));
    out.push_back(e->bin == BinOp::Add ? iadd() : e->bin == BinOp::Sub ? isub() : imul());
    return out;
  default:
    throw UnsupportedNode("fixed-width operation has no stack-machine encoding", e->pos);
  }
}

Code compile_bexp(const BExpr &b, bool cond, std::int64_t ofs) {
  Code out;
  switch (b->kind) {
  case BKind::BoolLit:
    if (b->value == cond) out.push_back(ibranch(ofs));
    return out;
  case BKind::Cmp:
    // The machine has no "less than" branch; l < r is evaluated as r > l
    // (and its negation as r <= l) by pushing the operands in swapped order.
    if (b->cmp == CmpOp::Lt) {
      append(out, compile_aexp(b->arhs));
      append(out, compile_aexp(b->alhs));
      out.push_back(cond ? ibgt(ofs) : ible(ofs));
      return out;
    }
    append(out, compile_aexp(b->alhs));
    append(out, compile_aexp(b->arhs));
    if (b->cmp == CmpOp::Eq)
      out.push_back(cond ? ibeq(ofs) : ibne(ofs));
    else
      out.push_back(cond ? ible(ofs) : ibgt(ofs));
    return out;
  case BKind::Not:
    return compile_bexp(b->lhs, !cond, ofs);
  case BKind::And: {
    Code c2 = compile_bexp(b->rhs, cond, ofs);
    Code c1 = compile_bexp(b->lhs, false, cond ? len(c2) : len(c2) + ofs);
    append(c1, c2);
    return c1;
  }
  case BKind::Or: {
    Code c2 = compile_bexp(b->rhs, cond, ofs);
    Code c1 = compile_bexp(b->lhs, true, cond ? len(c2) + ofs : len(c2));
    append(c1, c2);
    return c1;
  }
  case BKind::Implies:
    break;
  }
  throw UnsupportedNode("implication is only meaningful in assertions", b->pos);
}

Code compile_com(const Com &c) {
  Code out;
  switch (c->kind) {
  case CKind::Skip:
    return out;
  case CKind::Assign:
    out = compile_aexp(c->rhs);
    out.push_back(isetvar(c->name));
    return out;
  case CKind::Seq:
    out = compile_com(c->first);
    append(out, compile_com(c->second));
    return out;
  case CKind::If: {
    Code c1 = compile_com(c->first);
    Code c2 = compile_com(c->second);
    out = compile_bexp(c->cond, false, len(c1) + 1);
    append(out, c1);
    out.push_back(ibranch(len(c2)));
    append(out, c2);
    return out;
  }
  case CKind::While: {
    Code body = compile_com(c->first);
    Code cb = compile_bexp(c->cond, false, len(body) + 1);
    std::int64_t back = -(len(cb) + len(body) + 1);
    out = std::move(cb);
    append(out, body);
    out.push_back(ibranch(back));
    return out;
  }
  }
  return out;
}

Code compile_program(const Program &p) {
  Code out = compile_com(p.body);
  out.push_back(ihalt());
  return out;
}

bool branches_in_bounds(const Code &code) {
  for (std::size_t pc = 0; pc < code.size(); ++pc) {
    if (!is_branch(code[pc].op)) continue;
    std::int64_t target = static_cast<std::int64_t>(pc) + 1 + code[pc].delta;
    if (target < 0 || target > len(code)) return false;
  }
  return true;
}

VmOutcome vm_exec(std::uint64_t fuel, const Code &code, const Store &s0) {
  Store store = s0;
  std::vector<Int> stack;
  std::size_t pc = 0;

  auto pop = [&](Int &v) {
    if (stack.empty()) return false;
    v = std::move(stack.back());
    stack.pop_back();
    return true;
  };

  for (;;) {
    if (pc >= code.size()) return MachineError{"pc out of bounds", pc};
    if (fuel == 0) return OutOfFuel{};
    --fuel;
    const Instr &in = code[pc];
    Int a, b;
    switch (in.op) {
    case Opcode::Iconst:
      stack.push_back(in.n);
      ++pc;
      break;
    case Opcode::Ivar:
      stack.push_back(store.get(in.x));
      ++pc;
      break;
    case Opcode::Isetvar:
      if (!pop(a)) return MachineError{"stack underflow", pc};
      store.set(in.x, std::move(a));
      ++pc;
      break;
    case Opcode::Iadd:
    case Opcode::Isub:
    case Opcode::Imul:
      if (!pop(b) || !pop(a)) return MachineError{"stack underflow", pc};
      stack.push_back(in.op == Opcode::Iadd ? Int(a + b)
                      : in.op == Opcode::Isub ? Int(a - b)
                                              : Int(a * b));
      ++pc;
      break;
    case Opcode::Ibranch:
      pc = static_cast<std::size_t>(static_cast<std::int64_t>(pc) + 1 + in.delta);
      break;
    case Opcode::Ibeq:
    case Opcode::Ibne:
    case Opcode::Ible:
    case Opcode::Ibgt: {
      if (!pop(b) || !pop(a)) return MachineError{"stack underflow", pc};
      bool taken = in.op == Opcode::Ibeq   ? a == b
                   : in.op == Opcode::Ibne ? a != b
                   : in.op == Opcode::Ible ? a <= b
                                           : a > b;
      pc = taken ? static_cast<std::size_t>(static_cast<std::int64_t>(pc) + 1 + in.delta) : pc + 1;
      break;
    }
    case Opcode::Ihalt:
      return Done{std::move(store)};
    }
  }
}

std::string_view mnemonic(Opcode op) {
  switch (op) {
  case Opcode::Iconst: return "ICONST";
  case Opcode::Ivar: return "IVAR";
  case Opcode::Isetvar: return "ISETVAR";
  case Opcode::Iadd: return "IADD";
  case Opcode::Isub: return "ISUB";
  case Opcode::Imul: return "IMUL";
  case Opcode::Ibranch: return "IBRANCH";
  case Opcode::Ibeq: return "IBEQ";
  case Opcode::Ibne: return "IBNE";
  case Opcode::Ible: return "IBLE";
  case Opcode::Ibgt: return "IBGT";
  case Opcode::Ihalt: return "IHALT";
  }
  return "?";
}

std::string listing(const Code &code) {
  std::string out;
  for (const auto &in : code) {
    out += mnemonic(in.op);
    switch (in.op) {
    case Opcode::Iconst:
      out += " " + in.n.str();
      break;
    case Opcode::Ivar:
    case Opcode::Isetvar:
      out += " " + in.x;
      break;
    case Opcode::Ibranch:
    case Opcode::Ibeq:
    case Opcode::Ibne:
    case Opcode::Ible:
    case Opcode::Ibgt:
      out += " " + std::to_string(in.delta);
      break;
    default:
      break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace imp::stack
