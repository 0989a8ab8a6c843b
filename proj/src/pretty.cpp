#include "imp/frontend.hpp"

namespace imp {

namespace {

// Binding strength, low to high. Must agree with the parser's grammar levels.
int aprec(const AExpr &e) {
  switch (e->kind) {
  case AKind::Bin:
    return e->bin == BinOp::Mul ? 2 : 1;
  case AKind::Bit:
    return 3;
  case AKind::Neg:
  case AKind::BitNot:
    return 4;
  case AKind::IntLit:
    return e->value < 0 ? 4 : 5;
  default:
    return 5;
  }
}

std::string_view bin_text(BinOp op) {
  switch (op) {
  case BinOp::Add: return "+";
  case BinOp::Sub: return "-";
  case BinOp::Mul: return "*";
  }
  return "?";
}

std::string_view bit_text(BitOp op) {
  switch (op) {
  case BitOp::And: return "&";
  case BitOp::Or: return "|";
  case BitOp::Xor: return "^";
  case BitOp::Shl: return "<<";
  case BitOp::Shr: return ">>";
  }
  return "?";
}

void print_a(const AExpr &e, int min_prec, std::string &out) {
  int p = aprec(e);
  bool parens = p < min_prec;
  if (parens) out += '(';
  switch (e->kind) {
  case AKind::IntLit:
    out += e->value.str();
    break;
  case AKind::Var:
    out += e->name;
    break;
  case AKind::Neg:
    out += '-';
    if (e->lhs->kind == AKind::Neg || (e->lhs->kind == AKind::IntLit && e->lhs->value < 0)) out += ' ';
    print_a(e->lhs, 4, out);
    break;
  case AKind::BitNot:
    out += '~';
    print_a(e->lhs, 4, out);
    break;
  case AKind::Cast:
    out += to_string(e->cast);
    out += '(';
    print_a(e->lhs, 0, out);
    out += ')';
    break;
  case AKind::Bin:
  case AKind::Bit:
    print_a(e->lhs, p, out);
    out += ' ';
    out += e->kind == AKind::Bin ? bin_text(e->bin) : bit_text(e->bit);
    out += ' ';
    print_a(e->rhs, p + 1, out);
    break;
  }
  if (parens) out += ')';
}

int bprec(const BExpr &b) {
  switch (b->kind) {
  case BKind::Implies: return 0;
  case BKind::Or: return 1;
  case BKind::And: return 2;
  case BKind::Not: return 3;
  default: return 4;
  }
}

std::string_view cmp_text(CmpOp op) {
  switch (op) {
  case CmpOp::Eq: return "=";
  case CmpOp::Le: return "<=";
  case CmpOp::Lt: return "<";
  }
  return "?";
}

void print_b(const BExpr &b, int min_prec, std::string &out) {
  int p = bprec(b);
  bool parens = p < min_prec;
  if (parens) out += '(';
  switch (b->kind) {
  case BKind::BoolLit:
    out += b->value ? "true" : "false";
    break;
  case BKind::Cmp:
    print_a(b->alhs, 0, out);
    out += ' ';
    out += cmp_text(b->cmp);
    out += ' ';
    print_a(b->arhs, 0, out);
    break;
  case BKind::Not:
    out += '!';
    print_b(b->lhs, 3, out);
    break;
  case BKind::And:
    print_b(b->lhs, 2, out);
    out += " && ";
    print_b(b->rhs, 3, out);
    break;
  case BKind::Or:
    print_b(b->lhs, 1, out);
    out += " || ";
    print_b(b->rhs, 2, out);
    break;
  case BKind::Implies:
    print_b(b->lhs, 1, out);
    out += " -> ";
    print_b(b->rhs, 0, out);
    break;
  }
  if (parens) out += ')';
}

void indent(int depth, std::string &out) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

// Sequences print flattened: `;` is right-associative in the grammar, and the
// grouping of a left-nested Seq carries no meaning.
void print_c(const Com &c, int depth, std::string &out) {
  switch (c->kind) {
  case CKind::Skip:
    indent(depth, out);
    out += "skip";
    break;
  case CKind::Assign:
    indent(depth, out);
    out += c->name;
    out += " := ";
    print_a(c->rhs, 0, out);
    break;
  case CKind::Seq:
    print_c(c->first, depth, out);
    out += ";\n";
    print_c(c->second, depth, out);
    break;
  case CKind::If:
    indent(depth, out);
    out += "if ";
    print_b(c->cond, 0, out);
    out += " then\n";
    print_c(c->first, depth + 1, out);
    out += '\n';
    indent(depth, out);
    out += "else\n";
    print_c(c->second, depth + 1, out);
    out += '\n';
    indent(depth, out);
    out += "end";
    break;
  case CKind::While:
    indent(depth, out);
    out += "while ";
    print_b(c->cond, 0, out);
    if (c->invariant) {
      out += " invariant { ";
      print_b(c->invariant, 0, out);
      out += " }";
    }
    out += " do\n";
    print_c(c->first, depth + 1, out);
    out += '\n';
    indent(depth, out);
    out += "done";
    break;
  }
}

}  // namespace

std::string pretty(const AExpr &e) {
  std::string out;
  print_a(e, 0, out);
  return out;
}

std::string pretty(const BExpr &b) {
  std::string out;
  print_b(b, 0, out);
  return out;
}

std::string pretty(const Com &c) {
  std::string out;
  print_c(c, 0, out);
  return out;
}

std::string pretty(const Program &p) {
  std::string out;
  for (const auto &d : p.decls) {
    out += "var " + d.name;
    if (d.type == DeclTy::I32) out += ": i32";
    if (d.type == DeclTy::U32) out += ": u32";
    out += ";\n";
  }
  out += pretty(p.body);
  out += '\n';
  return out;
}

}  // namespace imp
