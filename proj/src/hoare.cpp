#include "imp/hoare.hpp"

namespace imp::hoare {

std::string_view to_string(VcOrigin origin) {
  switch (origin) {
  case VcOrigin::Init: return "init";
  case VcOrigin::Preservation: return "preservation";
  case VcOrigin::Exit: return "exit";
  case VcOrigin::Top: return "top";
  }
  return "?";
}

AExpr subst(const AExpr &a, const std::string &x, const AExpr &e) {
  switch (a->kind) {
  case AKind::IntLit:
    return a;
  case AKind::Var:
    return a->name == x ? e : a;
  case AKind::Neg:
    return neg(subst(a->lhs, x, e), a->pos);
  case AKind::BitNot:
    return bit_not(subst(a->lhs, x, e), a->pos);
  case AKind::Cast:
    return cast(a->cast, subst(a->lhs, x, e), a->pos);
  case AKind::Bin:
    return bin(a->bin, subst(a->lhs, x, e), subst(a->rhs, x, e), a->pos);
  case AKind::Bit:
    return bit(a->bit, subst(a->lhs, x, e), subst(a->rhs, x, e), a->pos);
  }
  return a;
}

Assertion subst(const Assertion &a, const std::string &x, const AExpr &e) {
  switch (a->kind) {
  case BKind::BoolLit:
    return a;
  case BKind::Cmp:
    return cmp(a->cmp, subst(a->alhs, x, e), subst(a->arhs, x, e), a->pos);
  case BKind::Not:
    return bnot(subst(a->lhs, x, e), a->pos);
  case BKind::And:
    return band(subst(a->lhs, x, e), subst(a->rhs, x, e), a->pos);
  case BKind::Or:
    return bor(subst(a->lhs, x, e), subst(a->rhs, x, e), a->pos);
  case BKind::Implies:
    return implies(subst(a->lhs, x, e), subst(a->rhs, x, e), a->pos);
  }
  return a;
}

WlpResult wlp(const Com &c, const Assertion &q) {
  switch (c->kind) {
  case CKind::Skip:
    return {q, {}};
  case CKind::Assign:
    return {subst(q, c->name, c->rhs), {}};
  case CKind::Seq: {
    WlpResult second = wlp(c->second, q);
    WlpResult first = wlp(c->first, second.pre);
    first.side.insert(first.side.end(), second.side.begin(), second.side.end());
    return first;
  }
  case CKind::If: {
    WlpResult t = wlp(c->first, q);
    WlpResult f = wlp(c->second, q);
    Assertion pre = band(implies(c->cond, t.pre), implies(bnot(c->cond), f.pre));
    t.side.insert(t.side.end(), f.side.begin(), f.side.end());
    return {pre, std::move(t.side)};
  }
  case CKind::While: {
    if (!c->invariant) throw MissingInvariant(c->pos);
    const Assertion &inv = c->invariant;
    WlpResult body = wlp(c->first, inv);
    std::vector<VerificationCondition> side;
    side.push_back({VcOrigin::Preservation, implies(band(inv, c->cond), body.pre)});
    side.push_back({VcOrigin::Exit, implies(band(inv, bnot(c->cond)), q)});
    side.insert(side.end(), body.side.begin(), body.side.end());
    return {inv, std::move(side)};
  }
  }
  return {q, {}};
}

std::vector<VerificationCondition> vcgen(const HoareTriple &t) {
  WlpResult w = wlp(t.com, t.post);
  std::vector<VerificationCondition> out;
  out.push_back({VcOrigin::Top, implies(t.pre, w.pre)});
  out.insert(out.end(), w.side.begin(), w.side.end());
  return out;
}

// ---------------------------------------------------------------------------
// SMT-LIB2 export

namespace {

bool is_closed(const AExpr &e) {
  std::set<std::string> vars;
  free_vars(e, vars);
  return vars.empty();
}

bool nonlinear(const AExpr &e) {
  if (!e) return false;
  if (e->kind == AKind::Bin && e->bin == BinOp::Mul && !is_closed(e->lhs) && !is_closed(e->rhs))
    return true;
  return nonlinear(e->lhs) || nonlinear(e->rhs);
}

bool nonlinear(const BExpr &b) {
  if (!b) return false;
  return nonlinear(b->alhs) || nonlinear(b->arhs) || nonlinear(b->lhs) || nonlinear(b->rhs);
}

// imp identifiers that collide with SMT-LIB reserved words or core symbols are
// written as quoted symbols.
std::string symbol(const std::string &name) {
  static const std::set<std::string> reserved = {
      "and", "or", "not", "xor", "ite", "distinct", "true", "false", "let", "forall",
      "exists", "match", "par", "_", "!", "as", "assert", "check-sat", "declare-const",
      "declare-fun", "define-fun", "push", "pop", "exit", "abs", "div", "mod", "Int", "Bool"};
  return reserved.count(name) ? "|" + name + "|" : name;
}

void smt_a(const AExpr &e, std::string &out) {
  switch (e->kind) {
  case AKind::IntLit:
    if (e->value < 0)
      out += "(- " + Int(-e->value).str() + ")";
    else
      out += e->value.str();
    return;
  case AKind::Var:
    out += symbol(e->name);
    return;
  case AKind::Neg:
    out += "(- ";
    smt_a(e->lhs, out);
    out += ')';
    return;
  case AKind::Bin:
    out += e->bin == BinOp::Add ? "(+ " : e->bin == BinOp::Sub ? "(- " : "(* ";
    smt_a(e->lhs, out);
    out += ' ';
    smt_a(e->rhs, out);
    out += ')';
    return;
  default:
    throw UnsupportedNode("fixed-width operation in an integer verification condition", e->pos);
  }
}

void smt_b(const BExpr &b, std::string &out) {
  auto binary = [&](std::string_view op, const BExpr &l, const BExpr &r) {
    out += '(';
    out += op;
    out += ' ';
    smt_b(l, out);
    out += ' ';
    smt_b(r, out);
    out += ')';
  };
  switch (b->kind) {
  case BKind::BoolLit:
    out += b->value ? "true" : "false";
    return;
  case BKind::Cmp:
    out += b->cmp == CmpOp::Eq ? "(= " : b->cmp == CmpOp::Le ? "(<= " : "(< ";
    smt_a(b->alhs, out);
    out += ' ';
    smt_a(b->arhs, out);
    out += ')';
    return;
  case BKind::Not:
    out += "(not ";
    smt_b(b->lhs, out);
    out += ')';
    return;
  case BKind::And:
    binary("and", b->lhs, b->rhs);
    return;
  case BKind::Or:
    binary("or", b->lhs, b->rhs);
    return;
  case BKind::Implies:
    binary("=>", b->lhs, b->rhs);
    return;
  }
}

}  // namespace

std::string emit_smtlib(const VerificationCondition &vc) {
  std::string out = nonlinear(vc.formula) ? "(set-logic QF_NIA)\n" : "(set-logic QF_LIA)\n";
  std::set<std::string> vars;
  free_vars(vc.formula, vars);
  for (const auto &v : vars) out += "(declare-const " + symbol(v) + " Int)\n";
  out += "(assert (not ";
  smt_b(vc.formula, out);
  out += "))\n(check-sat)\n";
  return out;
}

// ---------------------------------------------------------------------------
// Bounded validity check

BoundedResult bounded_check(const VerificationCondition &vc, std::int64_t bound,
                            std::uint64_t cap) {
  if (bound < 1) throw Error("bounded_check requires a positive bound");
  std::set<std::string> var_set;
  free_vars(vc.formula, var_set);
  std::vector<std::string> vars(var_set.begin(), var_set.end());

  const std::uint64_t width = 2 * static_cast<std::uint64_t>(bound) + 1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (total > cap / width)
      throw BudgetExceeded("enumeration box exceeds " + std::to_string(cap) + " stores");
    total *= width;
  }
  if (total > cap) throw BudgetExceeded("enumeration box exceeds " + std::to_string(cap) + " stores");

  std::vector<std::int64_t> values(vars.size(), -bound);
  for (;;) {
    Store s;
    for (std::size_t i = 0; i < vars.size(); ++i) s.set(vars[i], values[i]);
    if (!beval(s, vc.formula)) return Counterexample{std::move(s)};

    // Odometer: the last variable varies fastest.
    std::size_t i = vars.size();
    while (i > 0) {
      --i;
      if (values[i] < bound) {
        ++values[i];
        break;
      }
      values[i] = -bound;
      if (i == 0) return Valid{};
    }
    if (vars.empty()) return Valid{};
  }
}

}  // namespace imp::hoare
