#include "imp/typecheck.hpp"

namespace imp {

namespace {

std::string name_of(Ty t) { return std::string(to_string(t)); }

class Checker {
public:
  explicit Checker(const TypeEnv &env) : env_(env) {}

  // Natural type of an expression; nullopt when it only contains literals and
  // can adopt whatever type its context asks for.
  std::optional<Ty> synth(const AExpr &e) const {
    switch (e->kind) {
    case AKind::IntLit:
      return std::nullopt;
    case AKind::Var:
      return lookup(e->name, e->pos);
    case AKind::Neg:
      return synth(e->lhs);
    case AKind::Cast:
      synth(e->lhs);
      return e->cast;
    case AKind::Bin: {
      auto l = synth(e->lhs);
      auto r = synth(e->rhs);
      if (l && r && *l != *r) throw TypeError(e->rhs->pos, name_of(*l), name_of(*r));
      return l ? l : r;
    }
    case AKind::Bit: {
      auto l = synth(e->lhs);
      if (l && *l != Ty::U32) throw TypeError(e->lhs->pos, "u32", name_of(*l));
      auto r = synth(e->rhs);
      if (r && *r != Ty::U32) throw TypeError(e->rhs->pos, "u32", name_of(*r));
      return Ty::U32;
    }
    case AKind::BitNot: {
      auto c = synth(e->lhs);
      if (c && *c != Ty::U32) throw TypeError(e->lhs->pos, "u32", name_of(*c));
      return Ty::U32;
    }
    }
    return std::nullopt;
  }

  AExpr annotate(const AExpr &e, Ty t) const {
    auto natural = synth(e);
    if (natural && *natural != t) throw TypeError(e->pos, name_of(t), name_of(*natural));
    ANode n = *e;
    n.ty = t;
    switch (e->kind) {
    case AKind::IntLit:
    case AKind::Var:
      break;
    case AKind::Neg:
      n.lhs = annotate(e->lhs, t);
      break;
    case AKind::Cast:
      n.lhs = annotate(e->lhs, synth(e->lhs).value_or(Ty::I32));
      break;
    case AKind::Bin:
      n.lhs = annotate(e->lhs, t);
      n.rhs = annotate(e->rhs, t);
      break;
    case AKind::Bit:
      n.lhs = annotate(e->lhs, Ty::U32);
      n.rhs = annotate(e->rhs, Ty::U32);
      break;
    case AKind::BitNot:
      n.lhs = annotate(e->lhs, Ty::U32);
      break;
    }
    return std::make_shared<const ANode>(std::move(n));
  }

  BExpr check(const BExpr &b) const {
    BNode n = *b;
    switch (b->kind) {
    case BKind::BoolLit:
      break;
    case BKind::Cmp: {
      auto l = synth(b->alhs);
      auto r = synth(b->arhs);
      if (l && r && *l != *r) throw TypeError(b->arhs->pos, name_of(*l), name_of(*r));
      Ty t = l ? *l : r ? *r : Ty::I32;
      n.alhs = annotate(b->alhs, t);
      n.arhs = annotate(b->arhs, t);
      break;
    }
    case BKind::Not:
      n.lhs = check(b->lhs);
      break;
    case BKind::And:
    case BKind::Or:
    case BKind::Implies:
      n.lhs = check(b->lhs);
      n.rhs = check(b->rhs);
      break;
    }
    return std::make_shared<const BNode>(std::move(n));
  }

  Com check(const Com &c) const {
    CNode n = *c;
    switch (c->kind) {
    case CKind::Skip:
      break;
    case CKind::Assign:
      n.rhs = annotate(c->rhs, lookup(c->name, c->pos));
      break;
    case CKind::Seq:
    case CKind::If:
      if (c->cond) n.cond = check(c->cond);
      n.first = check(c->first);
      n.second = check(c->second);
      break;
    case CKind::While:
      n.cond = check(c->cond);
      n.first = check(c->first);
      break;
    }
    return std::make_shared<const CNode>(std::move(n));
  }

private:
  Ty lookup(const std::string &name, SourcePos pos) const {
    auto it = env_.find(name);
    if (it == env_.end()) throw UndeclaredVariable(pos, name);
    return it->second;
  }

  const TypeEnv &env_;
};

}  // namespace

TypeEnv default_env(const Program &p) {
  TypeEnv env;
  for (const auto &v : free_vars(p)) env[v] = Ty::I32;
  return env;
}

TypedProgram typecheck(const Program &p, const TypeEnv &env) {
  Checker checker(env);
  TypedProgram out;
  out.env = env;
  out.program.decls = p.decls;
  out.program.body = checker.check(p.body);
  return out;
}

TypeEnv declared_env(const Program &p) {
  TypeEnv env;
  for (const auto &d : p.decls) env[d.name] = d.type == DeclTy::U32 ? Ty::U32 : Ty::I32;
  return env;
}

TypedProgram typecheck(const Program &p) { return typecheck(p, declared_env(p)); }

std::optional<Ty> natural_type(const AExpr &e, const TypeEnv &env) {
  return Checker(env).synth(e);
}

Ty comparison_type(const BExpr &cmp, const TypeEnv &env) {
  Checker checker(env);
  auto l = checker.synth(cmp->alhs);
  if (l) return *l;
  return checker.synth(cmp->arhs).value_or(Ty::I32);
}

Word32 eval_fixed(const Store32 &s, const AExpr &e) {
  switch (e->kind) {
  case AKind::IntLit:
    return wrap32(e->value);
  case AKind::Var: {
    auto it = s.find(e->name);
    return it == s.end() ? 0u : it->second;
  }
  case AKind::Neg:
    return 0u - eval_fixed(s, e->lhs);
  case AKind::Cast:
    return eval_fixed(s, e->lhs);
  case AKind::BitNot:
    return ~eval_fixed(s, e->lhs);
  case AKind::Bin: {
    Word32 l = eval_fixed(s, e->lhs), r = eval_fixed(s, e->rhs);
    switch (e->bin) {
    case BinOp::Add: return l + r;
    case BinOp::Sub: return l - r;
    case BinOp::Mul: return static_cast<Word32>(static_cast<std::uint64_t>(l) * r);
    }
    break;
  }
  case AKind::Bit: {
    Word32 l = eval_fixed(s, e->lhs), r = eval_fixed(s, e->rhs);
    switch (e->bit) {
    case BitOp::And: return l & r;
    case BitOp::Or: return l | r;
    case BitOp::Xor: return l ^ r;
    case BitOp::Shl: return l << (r & 31u);
    case BitOp::Shr: return l >> (r & 31u);
    }
    break;
  }
  }
  return 0;
}

bool beval_fixed(const Store32 &s, const BExpr &b) {
  switch (b->kind) {
  case BKind::BoolLit:
    return b->value;
  case BKind::Cmp: {
    Word32 l = eval_fixed(s, b->alhs), r = eval_fixed(s, b->arhs);
    bool is_signed = b->alhs->ty.value_or(Ty::I32) == Ty::I32;
    switch (b->cmp) {
    case CmpOp::Eq: return l == r;
    case CmpOp::Le: return is_signed ? as_signed(l) <= as_signed(r) : l <= r;
    case CmpOp::Lt: return is_signed ? as_signed(l) < as_signed(r) : l < r;
    }
    break;
  }
  case BKind::Not:
    return !beval_fixed(s, b->lhs);
  case BKind::And:
    return beval_fixed(s, b->lhs) && beval_fixed(s, b->rhs);
  case BKind::Or:
    return beval_fixed(s, b->lhs) || beval_fixed(s, b->rhs);
  case BKind::Implies:
    return !beval_fixed(s, b->lhs) || beval_fixed(s, b->rhs);
  }
  return false;
}

namespace {

bool exec_fixed(Fuel &fuel, const Com &c, Store32 &s) {
  switch (c->kind) {
  case CKind::Skip:
    return true;
  case CKind::Assign:
    s[c->name] = eval_fixed(s, c->rhs);
    return true;
  case CKind::Seq:
    return exec_fixed(fuel, c->first, s) && exec_fixed(fuel, c->second, s);
  case CKind::If:
    return exec_fixed(fuel, beval_fixed(s, c->cond) ? c->first : c->second, s);
  case CKind::While:
    for (;;) {
      if (fuel == 0) return false;
      --fuel;
      if (!beval_fixed(s, c->cond)) return true;
      if (!exec_fixed(fuel, c->first, s)) return false;
    }
  }
  return true;
}

}  // namespace

Outcome32 ceval_fixed(Fuel fuel, const Com &c, const Store32 &s) {
  Store32 st = s;
  if (!exec_fixed(fuel, c, st)) return OutOfFuel{};
  return Done32{std::move(st)};
}

bool same_words(const Store32 &a, const Store32 &b) {
  auto get = [](const Store32 &m, const std::string &k) {
    auto it = m.find(k);
    return it == m.end() ? 0u : it->second;
  };
  for (const auto &[k, v] : a)
    if (get(b, k) != v) return false;
  for (const auto &[k, v] : b)
    if (get(a, k) != v) return false;
  return true;
}

std::string render(Word32 w, Ty ty) {
  return ty == Ty::I32 ? std::to_string(as_signed(w)) : std::to_string(w);
}

Word32 parse_word(const std::string &text) { return wrap32(Int(text)); }

Store32 inject(const Store &s) {
  Store32 out;
  for (const auto &[k, v] : s.bindings()) out[k] = wrap32(v);
  return out;
}

}  // namespace imp
