#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "imp/ast.hpp"
#include "imp/frontend.hpp"
#include "imp/semantics.hpp"

namespace testing {

inline std::string read_text(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto &e : std::filesystem::directory_iterator(CIMP_CORPUS_DIR))
    if (e.path().extension() == ".imp") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Small hand-rolled generator of core expressions, independent of the
// library's program generator. Values stay far below 2^63 so int64 oracles
// are exact.
class ExprGen {
public:
  explicit ExprGen(std::uint64_t seed, std::vector<std::string> vars = {"a", "b", "c"})
      : rng_(seed), vars_(std::move(vars)) {}

  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

  imp::AExpr aexp(int depth) {
    if (depth <= 1 || pick(4) == 0) {
      if (pick(2) == 0) return imp::lit(pick(10));
      return imp::var(vars_[pick(static_cast<int>(vars_.size()))]);
    }
    switch (pick(5)) {
    case 0: return imp::add(aexp(depth - 1), aexp(depth - 1));
    case 1: return imp::sub(aexp(depth - 1), aexp(depth - 1));
    case 2: return imp::mul(aexp(depth - 1), aexp(depth - 1));
    case 3: return imp::neg(aexp(depth - 1));
    default: return imp::add(aexp(depth - 1), imp::lit(pick(4)));
    }
  }

  imp::BExpr bexp(int depth) {
    if (depth <= 1 || pick(3) == 0) {
      if (pick(6) == 0) return imp::blit(pick(2) == 0);
      return imp::cmp(static_cast<imp::CmpOp>(pick(3)), aexp(3), aexp(3));
    }
    switch (pick(3)) {
    case 0: return imp::bnot(bexp(depth - 1));
    case 1: return imp::band(bexp(depth - 1), bexp(depth - 1));
    default: return imp::bor(bexp(depth - 1), bexp(depth - 1));
    }
  }

  imp::Store store(int range = 20) {
    imp::Store s;
    for (const auto &v : vars_) s.set(v, pick(2 * range + 1) - range);
    return s;
  }

private:
  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

// Independent int64 evaluator for core expressions.
inline std::int64_t oracle_eval(const imp::Store &s, const imp::AExpr &e) {
  using imp::AKind;
  switch (e->kind) {
  case AKind::IntLit: return static_cast<std::int64_t>(e->value);
  case AKind::Var: return static_cast<std::int64_t>(s.get(e->name));
  case AKind::Neg: return -oracle_eval(s, e->lhs);
  case AKind::Bin: {
    std::int64_t l = oracle_eval(s, e->lhs), r = oracle_eval(s, e->rhs);
    if (e->bin == imp::BinOp::Add) return l + r;
    if (e->bin == imp::BinOp::Sub) return l - r;
    return l * r;
  }
  default: throw std::logic_error("oracle: core expressions only");
  }
}

inline bool oracle_beval(const imp::Store &s, const imp::BExpr &b) {
  using imp::BKind;
  switch (b->kind) {
  case BKind::BoolLit: return b->value;
  case BKind::Cmp: {
    std::int64_t l = oracle_eval(s, b->alhs), r = oracle_eval(s, b->arhs);
    if (b->cmp == imp::CmpOp::Eq) return l == r;
    if (b->cmp == imp::CmpOp::Le) return l <= r;
    return l < r;
  }
  case BKind::Not: return !oracle_beval(s, b->lhs);
  case BKind::And: return oracle_beval(s, b->lhs) && oracle_beval(s, b->rhs);
  case BKind::Or: return oracle_beval(s, b->lhs) || oracle_beval(s, b->rhs);
  case BKind::Implies: return !oracle_beval(s, b->lhs) || oracle_beval(s, b->rhs);
  }
  return false;
}

}  // namespace testing
