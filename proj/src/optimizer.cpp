#include "imp/optimizer.hpp"

namespace imp::opt {

namespace {

struct Term {
  bool negative;
  AExpr expr;
};

bool is_additive(const AExpr &e) {
  return e->kind == AKind::Neg || (e->kind == AKind::Bin && e->bin != BinOp::Mul);
}

void flatten(const AExpr &e, bool negative, std::vector<Term> &out) {
  if (e->kind == AKind::Neg && !literal_value(e)) {
    flatten(e->lhs, !negative, out);
  } else if (e->kind == AKind::Bin && e->bin == BinOp::Add) {
    flatten(e->lhs, negative, out);
    flatten(e->rhs, negative, out);
  } else if (e->kind == AKind::Bin && e->bin == BinOp::Sub) {
    flatten(e->lhs, negative, out);
    flatten(e->rhs, !negative, out);
  } else {
    out.push_back({negative, e});
  }
}

AExpr with_children(const AExpr &e, AExpr lhs, AExpr rhs) {
  if (lhs == e->lhs && rhs == e->rhs) return e;
  ANode n = *e;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return std::make_shared<const ANode>(std::move(n));
}

bool is_zero(const AExpr &e) {
  auto v = literal_value(e);
  return v && *v == 0;
}

bool is_one(const AExpr &e) {
  auto v = literal_value(e);
  return v && *v == 1;
}

// Reassociate an additive chain holding at least two literal terms.
AExpr gather(const std::vector<Term> &terms) {
  Int constant = 0;
  std::vector<Term> rest;
  for (const auto &t : terms) {
    if (auto v = literal_value(t.expr))
      constant += t.negative ? -*v : *v;
    else
      rest.push_back(t);
  }
  if (rest.empty()) return make_int(constant);

  AExpr acc;
  std::size_t i = 0;
  if (rest[0].negative && constant != 0) {
    acc = make_int(constant);
    constant = 0;
  } else {
    acc = rest[0].negative ? neg(rest[0].expr) : rest[0].expr;
    i = 1;
  }
  for (; i < rest.size(); ++i) acc = rest[i].negative ? sub(acc, rest[i].expr) : add(acc, rest[i].expr);
  if (constant > 0) acc = add(acc, lit(constant));
  if (constant < 0) acc = sub(acc, lit(-constant));
  return acc;
}

}  // namespace

AExpr const_fold(const AExpr &e) {
  switch (e->kind) {
  case AKind::IntLit:
  case AKind::Var:
    return e;
  case AKind::Neg: {
    AExpr c = const_fold(e->lhs);
    if (auto v = literal_value(c)) return make_int(-*v);
    return with_children(e, c, nullptr);
  }
  case AKind::Bin: {
    if (e->bin != BinOp::Mul) {
      std::vector<Term> terms;
      flatten(e, false, terms);
      std::size_t literals = 0;
      for (auto &t : terms) {
        if (!is_additive(t.expr)) t.expr = const_fold(t.expr);
        if (literal_value(t.expr)) ++literals;
      }
      if (literals >= 2) return gather(terms);
    }
    AExpr l = const_fold(e->lhs), r = const_fold(e->rhs);
    auto lv = literal_value(l), rv = literal_value(r);
    if (lv && rv) {
      switch (e->bin) {
      case BinOp::Add: return make_int(*lv + *rv);
      case BinOp::Sub: return make_int(*lv - *rv);
      case BinOp::Mul: return make_int(*lv * *rv);
      }
    }
    return with_children(e, l, r);
  }
  case AKind::Bit:
    return with_children(e, const_fold(e->lhs), const_fold(e->rhs));
  case AKind::BitNot:
  case AKind::Cast:
    return with_children(e, const_fold(e->lhs), nullptr);
  }
  return e;
}

AExpr simplify_structural(const AExpr &e) {
  switch (e->kind) {
  case AKind::IntLit:
  case AKind::Var:
    return e;
  case AKind::Neg:
  case AKind::BitNot:
  case AKind::Cast:
    return with_children(e, simplify_structural(e->lhs), nullptr);
  case AKind::Bit:
    return with_children(e, simplify_structural(e->lhs), simplify_structural(e->rhs));
  case AKind::Bin:
    break;
  }
  AExpr l = simplify_structural(e->lhs), r = simplify_structural(e->rhs);
  switch (e->bin) {
  case BinOp::Add:
    if (is_zero(r)) return l;
    if (is_zero(l)) return r;
    break;
  case BinOp::Sub:
    if (equal(l, r)) return lit(0);
    if (is_zero(r)) return l;
    break;
  case BinOp::Mul:
    if (is_zero(l) || is_zero(r)) return lit(0);
    if (is_one(r)) return l;
    if (is_one(l)) return r;
    break;
  }
  return with_children(e, l, r);
}

AExpr simplify_aexp(const AExpr &e) {
  AExpr cur = e;
  for (;;) {
    AExpr next = simplify_structural(const_fold(cur));
    if (equal(next, cur)) return cur;
    cur = next;
  }
}

namespace {

bool fold_comparison(CmpOp op, const Int &l, const Int &r) {
  switch (op) {
  case CmpOp::Eq: return l == r;
  case CmpOp::Le: return l <= r;
  case CmpOp::Lt: return l < r;
  }
  return false;
}

Int as_typed(const Int &v, Ty ty) {
  Word32 w = wrap32(v);
  return ty == Ty::I32 ? Int(as_signed(w)) : Int(w);
}

bool is_lit(const BExpr &b, bool value) { return b->kind == BKind::BoolLit && b->value == value; }

}  // namespace

BExpr simplify_bool(const BExpr &b, const TypeEnv *env) {
  switch (b->kind) {
  case BKind::BoolLit:
    return b;
  case BKind::Cmp: {
    AExpr l = simplify_aexp(b->alhs), r = simplify_aexp(b->arhs);
    auto lv = literal_value(l), rv = literal_value(r);
    if (lv && rv) {
      if (!env) return blit(fold_comparison(b->cmp, *lv, *rv), b->pos);
      Ty t = comparison_type(b, *env);
      return blit(fold_comparison(b->cmp, as_typed(*lv, t), as_typed(*rv, t)), b->pos);
    }
    if (l == b->alhs && r == b->arhs) return b;
    BNode n = *b;
    n.alhs = l;
    n.arhs = r;
    return std::make_shared<const BNode>(std::move(n));
  }
  case BKind::Not: {
    BExpr c = simplify_bool(b->lhs, env);
    if (c->kind == BKind::BoolLit) return blit(!c->value, b->pos);
    return c == b->lhs ? b : bnot(c, b->pos);
  }
  case BKind::And: {
    BExpr l = simplify_bool(b->lhs, env), r = simplify_bool(b->rhs, env);
    if (is_lit(l, false) || is_lit(r, false)) return blit(false, b->pos);
    if (is_lit(l, true)) return r;
    if (is_lit(r, true)) return l;
    return l == b->lhs && r == b->rhs ? b : band(l, r, b->pos);
  }
  case BKind::Or: {
    BExpr l = simplify_bool(b->lhs, env), r = simplify_bool(b->rhs, env);
    if (is_lit(l, true) || is_lit(r, true)) return blit(true, b->pos);
    if (is_lit(l, false)) return r;
    if (is_lit(r, false)) return l;
    return l == b->lhs && r == b->rhs ? b : bor(l, r, b->pos);
  }
  case BKind::Implies:
    return b;
  }
  return b;
}

namespace {

Com dead_code_pass(const Com &c) {
  switch (c->kind) {
  case CKind::Skip:
  case CKind::Assign:
    return c;
  case CKind::Seq: {
    Com a = dead_code_pass(c->first), b = dead_code_pass(c->second);
    if (a->kind == CKind::Skip) return b;
    if (b->kind == CKind::Skip) return a;
    if (a->kind == CKind::Seq) return seq(a->first, seq(a->second, b, c->pos), a->pos);
    return a == c->first && b == c->second ? c : seq(a, b, c->pos);
  }
  case CKind::If: {
    if (c->cond->kind == BKind::BoolLit) return dead_code_pass(c->cond->value ? c->first : c->second);
    Com a = dead_code_pass(c->first), b = dead_code_pass(c->second);
    return a == c->first && b == c->second ? c : if_(c->cond, a, b, c->pos);
  }
  case CKind::While: {
    if (is_lit(c->cond, false)) return skip(c->pos);
    Com body = dead_code_pass(c->first);
    return body == c->first ? c : while_(c->cond, body, c->invariant, c->pos);
  }
  }
  return c;
}

Com expressions(const Com &c, const TypeEnv *env) {
  switch (c->kind) {
  case CKind::Skip:
    return c;
  case CKind::Assign: {
    AExpr r = simplify_aexp(c->rhs);
    return r == c->rhs ? c : assign(c->name, r, c->pos);
  }
  case CKind::Seq: {
    Com a = expressions(c->first, env), b = expressions(c->second, env);
    return a == c->first && b == c->second ? c : seq(a, b, c->pos);
  }
  case CKind::If: {
    BExpr b = simplify_bool(c->cond, env);
    Com t = expressions(c->first, env), f = expressions(c->second, env);
    if (b == c->cond && t == c->first && f == c->second) return c;
    return if_(b, t, f, c->pos);
  }
  case CKind::While: {
    BExpr b = simplify_bool(c->cond, env);
    Com body = expressions(c->first, env);
    if (b == c->cond && body == c->first) return c;
    return while_(b, body, c->invariant, c->pos);
  }
  }
  return c;
}

}  // namespace

Com dead_code(const Com &c) {
  Com cur = c;
  for (;;) {
    Com next = dead_code_pass(cur);
    if (next == cur) return cur;
    cur = next;
  }
}

Program optimize(const Program &p, int level) {
  if (level <= 0) return p;
  TypeEnv env;
  if (p.typed()) {
    typecheck(p);
    env = declared_env(p);
  }
  const TypeEnv *envp = p.typed() ? &env : nullptr;
  Program out = p;
  for (;;) {
    Com next = expressions(out.body, envp);
    if (level >= 2) next = dead_code(next);
    if (equal(next, out.body)) return out;
    out.body = next;
  }
}

}  // namespace imp::opt
