#include <set>

#include "imp/frontend.hpp"

namespace imp {

namespace {

// Recursive descent over the token stream. The only point of ambiguity is a
// `(` at the start of a Boolean atom, which may open either an arithmetic
// operand of a comparison or a parenthesized Boolean expression; the parser
// tries the comparison first and backtracks.
class Parser {
public:
  explicit Parser(std::span<const Token> toks) : toks_(toks) {
    if (toks_.empty() || toks_.back().kind != TokenKind::EndOfInput)
      throw ParseError({}, "malformed token stream", "end of input");
  }

  Program program() {
    Program p;
    std::set<std::string> seen;
    while (is_kw("var")) {
      Decl d;
      d.pos = next().pos();
      d.name = expect_ident().lexeme;
      if (!seen.insert(d.name).second)
        throw Error("duplicate declaration of '" + d.name + "'", d.pos);
      if (accept_op(":")) {
        if (accept_kw("i32"))
          d.type = DeclTy::I32;
        else if (accept_kw("u32"))
          d.type = DeclTy::U32;
        else
          fail("'i32' or 'u32'");
      }
      expect_punct(";");
      p.decls.push_back(std::move(d));
    }
    p.body = com();
    expect_eoi();
    return p;
  }

  Com com() {
    Com first = com_atom();
    if (peek().kind == TokenKind::Punctuation && peek().lexeme == ";") {
      SourcePos pos = next().pos();
      return seq(first, com(), pos);
    }
    return first;
  }

  AExpr aexp() {
    AExpr e = mult();
    for (;;) {
      if (is_op("+")) {
        SourcePos pos = next().pos();
        e = bin(BinOp::Add, e, mult(), pos);
      } else if (is_op("-")) {
        SourcePos pos = next().pos();
        e = bin(BinOp::Sub, e, mult(), pos);
      } else {
        return e;
      }
    }
  }

  BExpr assertion() {
    BExpr lhs = bor_level(true);
    if (is_op("->")) {
      SourcePos pos = next().pos();
      return implies(lhs, assertion(), pos);
    }
    return lhs;
  }

  BExpr bexp() { return bor_level(false); }

  void expect_eoi() {
    if (peek().kind != TokenKind::EndOfInput) fail("end of input");
  }

private:
  Com com_atom() {
    const Token &t = peek();
    if (accept_kw("skip")) return skip(t.pos());
    if (t.kind == TokenKind::Identifier) {
      Token name = next();
      expect_op(":=");
      return assign(name.lexeme, aexp(), name.pos());
    }
    if (is_kw("if")) {
      SourcePos pos = next().pos();
      BExpr c = bexp();
      expect_kw("then");
      Com a = com();
      expect_kw("else");
      Com b = com();
      expect_kw("end");
      return if_(c, a, b, pos);
    }
    if (is_kw("while")) {
      SourcePos pos = next().pos();
      BExpr c = bexp();
      Assertion inv;
      if (accept_kw("invariant")) {
        expect_punct("{");
        inv = assertion();
        expect_punct("}");
      }
      expect_kw("do");
      Com body = com();
      expect_kw("done");
      return while_(c, body, inv, pos);
    }
    fail("a command");
  }

  AExpr mult() {
    AExpr e = bitlevel();
    while (is_op("*")) {
      SourcePos pos = next().pos();
      e = bin(BinOp::Mul, e, bitlevel(), pos);
    }
    return e;
  }

  AExpr bitlevel() {
    AExpr e = unary();
    for (;;) {
      std::optional<BitOp> op;
      if (is_op("&")) op = BitOp::And;
      else if (is_op("|")) op = BitOp::Or;
      else if (is_op("^")) op = BitOp::Xor;
      else if (is_op("<<")) op = BitOp::Shl;
      else if (is_op(">>")) op = BitOp::Shr;
      if (!op) return e;
      SourcePos pos = next().pos();
      e = bit(*op, e, unary(), pos);
    }
  }

  AExpr unary() {
    if (is_op("-")) {
      SourcePos pos = next().pos();
      return neg(unary(), pos);
    }
    if (is_op("~")) {
      SourcePos pos = next().pos();
      return bit_not(unary(), pos);
    }
    return cast_level();
  }

  AExpr cast_level() {
    if (is_kw("i32") || is_kw("u32")) {
      Token t = next();
      expect_punct("(");
      AExpr e = aexp();
      expect_punct(")");
      return cast(t.lexeme == "i32" ? Ty::I32 : Ty::U32, e, t.pos());
    }
    return atom();
  }

  AExpr atom() {
    const Token &t = peek();
    if (t.kind == TokenKind::IntLiteral) {
      next();
      return lit(Int(t.lexeme), t.pos());
    }
    if (t.kind == TokenKind::Identifier) {
      next();
      return var(t.lexeme, t.pos());
    }
    if (accept_punct("(")) {
      AExpr e = aexp();
      expect_punct(")");
      return e;
    }
    fail("an arithmetic expression");
  }

  BExpr bor_level(bool in_assertion) {
    BExpr e = band_level(in_assertion);
    while (is_op("||")) {
      SourcePos pos = next().pos();
      e = bor(e, band_level(in_assertion), pos);
    }
    return e;
  }

  BExpr band_level(bool in_assertion) {
    BExpr e = bnot_level(in_assertion);
    while (is_op("&&")) {
      SourcePos pos = next().pos();
      e = band(e, bnot_level(in_assertion), pos);
    }
    return e;
  }

  BExpr bnot_level(bool in_assertion) {
    if (is_op("!")) {
      SourcePos pos = next().pos();
      return bnot(bnot_level(in_assertion), pos);
    }
    return batom(in_assertion);
  }

  BExpr batom(bool in_assertion) {
    const Token &t = peek();
    if (accept_kw("true")) return blit(true, t.pos());
    if (accept_kw("false")) return blit(false, t.pos());
    if (t.kind == TokenKind::Punctuation && t.lexeme == "(") {
      std::size_t mark = pos_;
      try {
        return comparison();
      } catch (const ParseError &first) {
        pos_ = mark;
        try {
          next();
          BExpr e = in_assertion ? assertion() : bexp();
          expect_punct(")");
          return e;
        } catch (const ParseError &second) {
          throw furthest(first, second);
        }
      }
    }
    return comparison();
  }

  BExpr comparison() {
    AExpr l = aexp();
    std::optional<CmpOp> op;
    if (is_op("=")) op = CmpOp::Eq;
    else if (is_op("<=")) op = CmpOp::Le;
    else if (is_op("<")) op = CmpOp::Lt;
    if (!op) fail("'=', '<=' or '<'");
    SourcePos pos = next().pos();
    return cmp(*op, l, aexp(), pos);
  }

  static const ParseError &furthest(const ParseError &a, const ParseError &b) {
    auto key = [](const ParseError &e) { return std::pair(e.pos().line, e.pos().column); };
    return key(b) >= key(a) ? b : a;
  }

  const Token &peek() const { return toks_[pos_]; }
  const Token &next() {
    const Token &t = toks_[pos_];
    if (t.kind != TokenKind::EndOfInput) ++pos_;
    return t;
  }

  bool is_kw(std::string_view kw) const {
    return peek().kind == TokenKind::Keyword && peek().lexeme == kw;
  }
  bool is_op(std::string_view op) const {
    return peek().kind == TokenKind::Operator && peek().lexeme == op;
  }
  bool accept_kw(std::string_view kw) {
    if (!is_kw(kw)) return false;
    next();
    return true;
  }
  bool accept_op(std::string_view op) {
    if (!is_op(op)) return false;
    next();
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (peek().kind != TokenKind::Punctuation || peek().lexeme != p) return false;
    next();
    return true;
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) fail("'" + std::string(kw) + "'");
  }
  void expect_op(std::string_view op) {
    if (!accept_op(op)) fail("'" + std::string(op) + "'");
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("'" + std::string(p) + "'");
  }
  const Token &expect_ident() {
    if (peek().kind != TokenKind::Identifier) fail("an identifier");
    return next();
  }

  [[noreturn]] void fail(const std::string &expected) const {
    const Token &t = peek();
    std::string found =
        t.kind == TokenKind::EndOfInput ? std::string("end of input") : "'" + t.lexeme + "'";
    throw ParseError(t.pos(), found, expected);
  }

  std::span<const Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(std::span<const Token> tokens) { return Parser(tokens).program(); }

Program parse_program(std::string_view source) {
  auto toks = lex(source);
  return parse(toks);
}

Assertion parse_assertion(std::string_view source) {
  auto toks = lex(source);
  Parser p(toks);
  Assertion a = p.assertion();
  p.expect_eoi();
  return a;
}

AExpr parse_aexp(std::string_view source) {
  auto toks = lex(source);
  Parser p(toks);
  AExpr e = p.aexp();
  p.expect_eoi();
  return e;
}

BExpr parse_bexp(std::string_view source) {
  auto toks = lex(source);
  Parser p(toks);
  BExpr b = p.bexp();
  p.expect_eoi();
  return b;
}

}  // namespace imp
