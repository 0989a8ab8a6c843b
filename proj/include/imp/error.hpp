#pragma once

#include <stdexcept>
#include <string>

namespace imp {

/// 1-based line/column in the source text. A zero line means "no position".
struct SourcePos {
  int line = 0;
  int column = 0;

  bool valid() const { return line > 0; }
  friend bool operator==(const SourcePos &, const SourcePos &) = default;
};

std::string to_string(const SourcePos &pos);

/// Base class for every user-facing diagnostic raised by the toolchain.
class Error : public std::runtime_error {
public:
  Error(const std::string &message, SourcePos pos = {})
      : std::runtime_error(message), pos_(pos) {}

  const SourcePos &pos() const { return pos_; }

private:
  SourcePos pos_;
};

class LexError : public Error {
public:
  LexError(SourcePos pos, char32_t offending);
  char32_t offending() const { return offending_; }

private:
  char32_t offending_;
};

class ParseError : public Error {
public:
  ParseError(SourcePos pos, const std::string &found, const std::string &expected)
      : Error("expected " + expected + ", found " + found, pos), expected_(expected) {}
  const std::string &expected() const { return expected_; }

private:
  std::string expected_;
};

/// An AST node reached an evaluator or compiler stage that does not support it
/// (for instance a bit operation in the unbounded semantics).
class UnsupportedNode : public Error {
public:
  using Error::Error;
};

class TypeError : public Error {
public:
  TypeError(SourcePos pos, const std::string &expected, const std::string &found)
      : Error("type mismatch: expected " + expected + ", found " + found, pos),
        expected_(expected), found_(found) {}
  const std::string &expected() const { return expected_; }
  const std::string &found() const { return found_; }

private:
  std::string expected_, found_;
};

class UndeclaredVariable : public Error {
public:
  UndeclaredVariable(SourcePos pos, const std::string &name)
      : Error("undeclared variable '" + name + "'", pos), name_(name) {}
  const std::string &name() const { return name_; }

private:
  std::string name_;
};

class MissingInvariant : public Error {
public:
  explicit MissingInvariant(SourcePos pos)
      : Error("while loop has no invariant annotation", pos) {}
};

class BudgetExceeded : public Error {
public:
  using Error::Error;
};

class MalformedCode : public Error {
public:
  using Error::Error;
};

class AsmError : public Error {
public:
  AsmError(int line, const std::string &reason)
      : Error(reason, SourcePos{line, 1}) {}
};

}  // namespace imp
