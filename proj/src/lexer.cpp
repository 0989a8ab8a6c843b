#include <array>
#include <cctype>
#include <cstdio>

#include "imp/frontend.hpp"

namespace imp {

namespace {

constexpr std::array<std::string_view, 14> kKeywords = {
    "var", "skip", "if", "then", "else", "end", "while",
    "invariant", "do", "done", "true", "false", "i32", "u32"};

// Longest match first.
constexpr std::array<std::string_view, 18> kOperators = {
    ":=", "&&", "||", "<<", ">>", "<=", "->", "+", "-", "*",
    "&",  "|",  "^",  "~",  "!",  "=",  "<",  ":"};

constexpr std::string_view kPunctuation = "(){};";

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Decode the code point at `i` for diagnostics; malformed bytes are reported raw.
char32_t decode_at(std::string_view s, std::size_t i) {
  auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> char32_t {
    return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) & 0x3F : 0;
  };
  if (b0 < 0x80) return b0;
  if ((b0 & 0xE0) == 0xC0) return ((b0 & 0x1F) << 6) | cont(1);
  if ((b0 & 0xF0) == 0xE0) return ((b0 & 0x0F) << 12) | (cont(1) << 6) | cont(2);
  if ((b0 & 0xF8) == 0xF0)
    return ((b0 & 0x07) << 18) | (cont(1) << 12) | (cont(2) << 6) | cont(3);
  return b0;
}

std::string describe(char32_t c) {
  if (c >= 0x20 && c < 0x7F) return std::string("'") + static_cast<char>(c) + "'";
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(c));
  return buf;
}

}  // namespace

LexError::LexError(SourcePos pos, char32_t offending)
    : Error("unexpected character " + describe(offending), pos), offending_(offending) {}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;  // count code points, not bytes
      }
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }

    Token t;
    t.line = line;
    t.column = col;

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = TokenKind::IntLiteral;
      t.lexeme = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      t.lexeme = std::string(src.substr(i, j - i));
      t.kind = TokenKind::Identifier;
      for (auto kw : kKeywords)
        if (kw == t.lexeme) t.kind = TokenKind::Keyword;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (kPunctuation.find(c) != std::string_view::npos) {
      t.kind = TokenKind::Punctuation;
      t.lexeme = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (auto op : kOperators) {
      if (src.substr(i, op.size()) == op) {
        t.kind = TokenKind::Operator;
        t.lexeme = std::string(op);
        advance(op.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) throw LexError(SourcePos{line, col}, decode_at(src, i));
  }

  Token eoi;
  eoi.kind = TokenKind::EndOfInput;
  eoi.line = line;
  eoi.column = col;
  out.push_back(eoi);
  return out;
}

}  // namespace imp
