#include <algorithm>
#include <optional>
#include <set>

#include "imp/regalloc.hpp"

namespace imp::regalloc {

RegInstr load_const(int dst, Int n) {
  RegInstr i;
  i.kind = RegInstrKind::LoadConst;
  i.dst = dst;
  i.value = std::move(n);
  return i;
}

RegInstr load_var(int dst, std::string x) {
  RegInstr i;
  i.kind = RegInstrKind::LoadVar;
  i.dst = dst;
  i.name = std::move(x);
  return i;
}

RegInstr op(RegOpKind kind, int dst, int lhs, int rhs) {
  RegInstr i;
  i.kind = RegInstrKind::Op;
  i.op = kind;
  i.dst = dst;
  i.lhs = lhs;
  i.rhs = rhs;
  return i;
}

RegInstr spill(int src) {
  RegInstr i;
  i.kind = RegInstrKind::Spill;
  i.src = src;
  return i;
}

RegInstr reload(int dst) {
  RegInstr i;
  i.kind = RegInstrKind::Reload;
  i.dst = dst;
  return i;
}

namespace {

// A node viewed as a binary operator application. Unary forms get a synthetic
// constant operand; casts are transparent.
struct Binary {
  RegOpKind kind;
  const AExpr &lhs;
  const AExpr &rhs;
};

const AExpr &zero_literal() {
  static const AExpr z = lit(0);
  return z;
}

const AExpr &all_ones_literal() {
  static const AExpr m = lit(Int(0xFFFFFFFFu));
  return m;
}

const AExpr &strip_casts(const AExpr &e) {
  const AExpr *cur = &e;
  while ((*cur)->kind == AKind::Cast) cur = &(*cur)->lhs;
  return *cur;
}

bool is_leaf(const AExpr &e) { return e->kind == AKind::IntLit || e->kind == AKind::Var; }

Binary as_binary(const AExpr &e) {
  switch (e->kind) {
  case AKind::Neg:
    return {RegOpKind::Sub, zero_literal(), e->lhs};
  case AKind::BitNot:
    return {RegOpKind::Xor, e->lhs, all_ones_literal()};
  case AKind::Bin: {
    RegOpKind k = e->bin == BinOp::Add ? RegOpKind::Add
                  : e->bin == BinOp::Sub ? RegOpKind::Sub
                                         : RegOpKind::Mul;
    return {k, e->lhs, e->rhs};
  }
  case AKind::Bit: {
    static constexpr RegOpKind kinds[] = {RegOpKind::And, RegOpKind::Or, RegOpKind::Xor,
                                          RegOpKind::Shl, RegOpKind::Shr};
    return {kinds[static_cast<int>(e->bit)], e->lhs, e->rhs};
  }
  default:
    throw UnsupportedNode("not an operator node", e->pos);
  }
}

int need(const AExpr &raw) {
  const AExpr &e = strip_casts(raw);
  if (is_leaf(e)) return 1;
  Binary b = as_binary(e);
  int l = need(b.lhs), r = need(b.rhs);
  return l == r ? l + 1 : std::max(l, r);
}

// Evaluate `raw` into register `base`, using only registers base..k-1.
void gen(const AExpr &raw, int base, int k, RegCode &out) {
  const AExpr &e = strip_casts(raw);
  if (e->kind == AKind::IntLit) {
    out.push_back(load_const(base, e->value));
    return;
  }
  if (e->kind == AKind::Var) {
    out.push_back(load_var(base, e->name));
    return;
  }
  Binary b = as_binary(e);
  int avail = k - base;
  int l = need(b.lhs), r = need(b.rhs);
  if (l >= avail && r >= avail) {
    gen(b.rhs, base, k, out);
    out.push_back(spill(base));
    gen(b.lhs, base, k, out);
    out.push_back(reload(base + 1));
    out.push_back(op(b.kind, base, base, base + 1));
  } else if (l >= r) {
    gen(b.lhs, base, k, out);
    gen(b.rhs, base + 1, k, out);
    out.push_back(op(b.kind, base, base, base + 1));
  } else {
    gen(b.rhs, base, k, out);
    gen(b.lhs, base + 1, k, out);
    out.push_back(op(b.kind, base, base + 1, base));
  }
}

std::string_view op_name(RegOpKind k) {
  switch (k) {
  case RegOpKind::Add: return "ADD";
  case RegOpKind::Sub: return "SUB";
  case RegOpKind::Mul: return "MUL";
  case RegOpKind::And: return "AND";
  case RegOpKind::Or: return "OR";
  case RegOpKind::Xor: return "XOR";
  case RegOpKind::Shl: return "SHL";
  case RegOpKind::Shr: return "SHR";
  }
  return "?";
}

}  // namespace

int ershov(const AExpr &e) { return need(e); }

RegCode alloc_codegen(const AExpr &e, int k) {
  if (k < 2) throw Error("register allocation needs at least two registers");
  RegCode out;
  gen(e, 0, k, out);
  return out;
}

Int reg_exec(const RegCode &code, const Store &s, int k) {
  std::vector<std::optional<Int>> regs(static_cast<std::size_t>(k));
  std::vector<Int> spills;
  auto check = [&](int r) {
    if (r < 0 || r >= k) throw MalformedCode("register r" + std::to_string(r) + " out of range");
    return static_cast<std::size_t>(r);
  };
  auto read = [&](int r) -> const Int & {
    auto &slot = regs[check(r)];
    if (!slot) throw MalformedCode("read of unwritten register r" + std::to_string(r));
    return *slot;
  };

  for (const auto &in : code) {
    switch (in.kind) {
    case RegInstrKind::LoadConst:
      regs[check(in.dst)] = in.value;
      break;
    case RegInstrKind::LoadVar:
      regs[check(in.dst)] = s.get(in.name);
      break;
    case RegInstrKind::Op: {
      const Int &a = read(in.lhs);
      const Int &b = read(in.rhs);
      Int v;
      switch (in.op) {
      case RegOpKind::Add: v = a + b; break;
      case RegOpKind::Sub: v = a - b; break;
      case RegOpKind::Mul: v = a * b; break;
      default:
        throw UnsupportedNode("bit operation in unbounded register code");
      }
      regs[check(in.dst)] = std::move(v);
      break;
    }
    case RegInstrKind::Spill:
      spills.push_back(read(in.src));
      break;
    case RegInstrKind::Reload:
      if (spills.empty()) throw MalformedCode("reload from empty spill stack");
      regs[check(in.dst)] = std::move(spills.back());
      spills.pop_back();
      break;
    }
  }
  return read(0);
}

int max_live_registers(const RegCode &code) {
  // Backward pass: a register is live between a write and its last read.
  std::set<int> live;
  int best = 0;
  for (auto it = code.rbegin(); it != code.rend(); ++it) {
    switch (it->kind) {
    case RegInstrKind::LoadConst:
    case RegInstrKind::LoadVar:
    case RegInstrKind::Reload:
      live.insert(it->dst);  // the written value occupies dst right after this point
      best = std::max(best, static_cast<int>(live.size()));
      live.erase(it->dst);
      break;
    case RegInstrKind::Op:
      live.insert(it->dst);
      best = std::max(best, static_cast<int>(live.size()));
      live.erase(it->dst);
      live.insert(it->lhs);
      live.insert(it->rhs);
      best = std::max(best, static_cast<int>(live.size()));
      break;
    case RegInstrKind::Spill:
      live.insert(it->src);
      best = std::max(best, static_cast<int>(live.size()));
      break;
    }
  }
  return best;
}

std::size_t spill_count(const RegCode &code) {
  return static_cast<std::size_t>(std::count_if(
      code.begin(), code.end(), [](const RegInstr &i) { return i.kind == RegInstrKind::Spill; }));
}

std::string listing(const RegCode &code) {
  std::string out;
  auto r = [](int i) { return "r" + std::to_string(i); };
  for (const auto &in : code) {
    switch (in.kind) {
    case RegInstrKind::LoadConst:
      out += "LOADCONST " + r(in.dst) + " " + in.value.str();
      break;
    case RegInstrKind::LoadVar:
      out += "LOADVAR " + r(in.dst) + " " + in.name;
      break;
    case RegInstrKind::Op:
      out += "OP " + std::string(op_name(in.op)) + " " + r(in.dst) + " " + r(in.lhs) + " " +
             r(in.rhs);
      break;
    case RegInstrKind::Spill:
      out += "SPILL " + r(in.src);
      break;
    case RegInstrKind::Reload:
      out += "RELOAD " + r(in.dst);
      break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace imp::regalloc
