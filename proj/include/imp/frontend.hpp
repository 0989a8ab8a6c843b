#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imp/ast.hpp"

namespace imp {

enum class TokenKind { Keyword, Identifier, IntLiteral, Operator, Punctuation, EndOfInput };

struct Token {
  TokenKind kind = TokenKind::EndOfInput;
  std::string lexeme;
  int line = 1;
  int column = 1;

  SourcePos pos() const { return {line, column}; }
};

/// Tokenize imp source. `//` comments and whitespace are dropped and the
/// sequence always ends with an EndOfInput token. Throws LexError.
std::vector<Token> lex(std::string_view source);

/// Parse a whole program. Throws ParseError at the first violation.
Program parse(std::span<const Token> tokens);
Program parse_program(std::string_view source);

/// Parse a standalone assertion (the `--pre`/`--post` arguments of `cimp vc`).
Assertion parse_assertion(std::string_view source);
AExpr parse_aexp(std::string_view source);
BExpr parse_bexp(std::string_view source);

/// Render back to source with the minimal parentheses the grammar requires.
std::string pretty(const Program &p);
std::string pretty(const Com &c);
std::string pretty(const AExpr &e);
std::string pretty(const BExpr &b);

}  // namespace imp
