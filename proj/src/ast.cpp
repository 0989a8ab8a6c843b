#include "imp/ast.hpp"

namespace imp {

std::string to_string(const SourcePos &pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

std::string_view to_string(Ty ty) { return ty == Ty::I32 ? "i32" : "u32"; }

namespace {

template <typename Node>
std::shared_ptr<const Node> share(Node &&n) {
  return std::make_shared<const Node>(std::move(n));
}

}  // namespace

AExpr lit(Int value, SourcePos pos) {
  ANode n;
  n.kind = AKind::IntLit;
  n.value = std::move(value);
  n.pos = pos;
  return share(std::move(n));
}

AExpr var(std::string name, SourcePos pos) {
  ANode n;
  n.kind = AKind::Var;
  n.name = std::move(name);
  n.pos = pos;
  return share(std::move(n));
}

AExpr neg(AExpr operand, SourcePos pos) {
  ANode n;
  n.kind = AKind::Neg;
  n.lhs = std::move(operand);
  n.pos = pos;
  return share(std::move(n));
}

AExpr bin(BinOp op, AExpr lhs, AExpr rhs, SourcePos pos) {
  ANode n;
  n.kind = AKind::Bin;
  n.bin = op;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  n.pos = pos;
  return share(std::move(n));
}

AExpr add(AExpr lhs, AExpr rhs) { return bin(BinOp::Add, std::move(lhs), std::move(rhs)); }
AExpr sub(AExpr lhs, AExpr rhs) { return bin(BinOp::Sub, std::move(lhs), std::move(rhs)); }
AExpr mul(AExpr lhs, AExpr rhs) { return bin(BinOp::Mul, std::move(lhs), std::move(rhs)); }

AExpr bit(BitOp op, AExpr lhs, AExpr rhs, SourcePos pos) {
  ANode n;
  n.kind = AKind::Bit;
  n.bit = op;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  n.pos = pos;
  return share(std::move(n));
}

AExpr bit_not(AExpr operand, SourcePos pos) {
  ANode n;
  n.kind = AKind::BitNot;
  n.lhs = std::move(operand);
  n.pos = pos;
  return share(std::move(n));
}

AExpr cast(Ty target, AExpr operand, SourcePos pos) {
  ANode n;
  n.kind = AKind::Cast;
  n.cast = target;
  n.lhs = std::move(operand);
  n.pos = pos;
  return share(std::move(n));
}

AExpr make_int(const Int &value) {
  if (value < 0) return neg(lit(-value));
  return lit(value);
}

std::optional<Int> literal_value(const AExpr &e) {
  if (e->kind == AKind::IntLit) return e->value;
  if (e->kind == AKind::Neg && e->lhs->kind == AKind::IntLit) return Int(-e->lhs->value);
  return std::nullopt;
}

bool is_core(const AExpr &e) {
  switch (e->kind) {
  case AKind::IntLit:
  case AKind::Var:
    return true;
  case AKind::Neg:
    return is_core(e->lhs);
  case AKind::Bin:
    return is_core(e->lhs) && is_core(e->rhs);
  default:
    return false;
  }
}

BExpr blit(bool value, SourcePos pos) {
  BNode n;
  n.kind = BKind::BoolLit;
  n.value = value;
  n.pos = pos;
  return share(std::move(n));
}

BExpr cmp(CmpOp op, AExpr lhs, AExpr rhs, SourcePos pos) {
  BNode n;
  n.kind = BKind::Cmp;
  n.cmp = op;
  n.alhs = std::move(lhs);
  n.arhs = std::move(rhs);
  n.pos = pos;
  return share(std::move(n));
}

BExpr eq(AExpr lhs, AExpr rhs) { return cmp(CmpOp::Eq, std::move(lhs), std::move(rhs)); }
BExpr le(AExpr lhs, AExpr rhs) { return cmp(CmpOp::Le, std::move(lhs), std::move(rhs)); }
BExpr lt(AExpr lhs, AExpr rhs) { return cmp(CmpOp::Lt, std::move(lhs), std::move(rhs)); }

namespace {

BExpr bconn(BKind kind, BExpr lhs, BExpr rhs, SourcePos pos) {
  BNode n;
  n.kind = kind;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  n.pos = pos;
  return share(std::move(n));
}

}  // namespace

BExpr bnot(BExpr operand, SourcePos pos) { return bconn(BKind::Not, std::move(operand), nullptr, pos); }
BExpr band(BExpr lhs, BExpr rhs, SourcePos pos) { return bconn(BKind::And, std::move(lhs), std::move(rhs), pos); }
BExpr bor(BExpr lhs, BExpr rhs, SourcePos pos) { return bconn(BKind::Or, std::move(lhs), std::move(rhs), pos); }
BExpr implies(BExpr lhs, BExpr rhs, SourcePos pos) {
  return bconn(BKind::Implies, std::move(lhs), std::move(rhs), pos);
}

Com skip(SourcePos pos) {
  CNode n;
  n.kind = CKind::Skip;
  n.pos = pos;
  return share(std::move(n));
}

Com assign(std::string name, AExpr rhs, SourcePos pos) {
  CNode n;
  n.kind = CKind::Assign;
  n.name = std::move(name);
  n.rhs = std::move(rhs);
  n.pos = pos;
  return share(std::move(n));
}

Com seq(Com first, Com second, SourcePos pos) {
  CNode n;
  n.kind = CKind::Seq;
  n.first = std::move(first);
  n.second = std::move(second);
  n.pos = pos;
  return share(std::move(n));
}

Com seq(std::vector<Com> commands) {
  if (commands.empty()) return skip();
  Com result = commands.back();
  for (auto it = commands.rbegin() + 1; it != commands.rend(); ++it) result = seq(*it, result);
  return result;
}

Com if_(BExpr cond, Com then_branch, Com else_branch, SourcePos pos) {
  CNode n;
  n.kind = CKind::If;
  n.cond = std::move(cond);
  n.first = std::move(then_branch);
  n.second = std::move(else_branch);
  n.pos = pos;
  return share(std::move(n));
}

Com while_(BExpr cond, Com body, Assertion invariant, SourcePos pos) {
  CNode n;
  n.kind = CKind::While;
  n.cond = std::move(cond);
  n.first = std::move(body);
  n.invariant = std::move(invariant);
  n.pos = pos;
  return share(std::move(n));
}

bool equal(const AExpr &a, const AExpr &b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
  case AKind::IntLit:
    return a->value == b->value;
  case AKind::Var:
    return a->name == b->name;
  case AKind::Neg:
  case AKind::BitNot:
    return equal(a->lhs, b->lhs);
  case AKind::Cast:
    return a->cast == b->cast && equal(a->lhs, b->lhs);
  case AKind::Bin:
    return a->bin == b->bin && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  case AKind::Bit:
    return a->bit == b->bit && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

bool equal(const BExpr &a, const BExpr &b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
  case BKind::BoolLit:
    return a->value == b->value;
  case BKind::Cmp:
    return a->cmp == b->cmp && equal(a->alhs, b->alhs) && equal(a->arhs, b->arhs);
  case BKind::Not:
    return equal(a->lhs, b->lhs);
  case BKind::And:
  case BKind::Or:
  case BKind::Implies:
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

bool equal(const Com &a, const Com &b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
  case CKind::Skip:
    return true;
  case CKind::Assign:
    return a->name == b->name && equal(a->rhs, b->rhs);
  case CKind::Seq:
    return equal(a->first, b->first) && equal(a->second, b->second);
  case CKind::If:
    return equal(a->cond, b->cond) && equal(a->first, b->first) && equal(a->second, b->second);
  case CKind::While:
    return equal(a->cond, b->cond) && equal(a->invariant, b->invariant) &&
           equal(a->first, b->first);
  }
  return false;
}

bool equal(const Program &a, const Program &b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i)
    if (a.decls[i].name != b.decls[i].name || a.decls[i].type != b.decls[i].type) return false;
  return equal(a.body, b.body);
}

std::size_t node_count(const AExpr &e) {
  if (!e) return 0;
  return 1 + node_count(e->lhs) + node_count(e->rhs);
}

std::size_t node_count(const BExpr &b) {
  if (!b) return 0;
  return 1 + node_count(b->alhs) + node_count(b->arhs) + node_count(b->lhs) + node_count(b->rhs);
}

std::size_t node_count(const Com &c) {
  if (!c) return 0;
  return 1 + node_count(c->rhs) + node_count(c->cond) + node_count(c->first) +
         node_count(c->second);
}

void free_vars(const AExpr &e, std::set<std::string> &out) {
  if (!e) return;
  if (e->kind == AKind::Var) out.insert(e->name);
  free_vars(e->lhs, out);
  free_vars(e->rhs, out);
}

void free_vars(const BExpr &b, std::set<std::string> &out) {
  if (!b) return;
  free_vars(b->alhs, out);
  free_vars(b->arhs, out);
  free_vars(b->lhs, out);
  free_vars(b->rhs, out);
}

// Variables read or assigned by the command. Loop invariants are not included.
void free_vars(const Com &c, std::set<std::string> &out) {
  if (!c) return;
  if (c->kind == CKind::Assign) out.insert(c->name);
  free_vars(c->rhs, out);
  free_vars(c->cond, out);
  free_vars(c->first, out);
  free_vars(c->second, out);
}

std::set<std::string> free_vars(const Program &p) {
  std::set<std::string> out;
  for (const auto &d : p.decls) out.insert(d.name);
  free_vars(p.body, out);
  return out;
}

bool contains_while(const Com &c) { return count_while(c) > 0; }

std::size_t count_while(const Com &c) {
  if (!c) return 0;
  return (c->kind == CKind::While ? 1 : 0) + count_while(c->first) + count_while(c->second);
}

}  // namespace imp
