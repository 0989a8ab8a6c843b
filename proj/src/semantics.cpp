#include <sstream>

#include "imp/semantics.hpp"

namespace imp {

bool operator==(const Store &a, const Store &b) {
  for (const auto &[k, v] : a.bindings_)
    if (b.get(k) != v) return false;
  for (const auto &[k, v] : b.bindings_)
    if (a.get(k) != v) return false;
  return true;
}

std::string serialize(const Store &s) {
  std::string out;
  for (const auto &[k, v] : s.bindings()) out += k + "=" + v.str() + "\n";
  return out;
}

Store parse_store(std::string_view text) {
  Store s;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto comment = line.find("//");
    if (comment != std::string::npos) line.erase(comment);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eqpos = line.find('=');
    if (eqpos == std::string::npos)
      throw Error("expected name=value", SourcePos{lineno, static_cast<int>(first) + 1});
    auto trim = [](std::string t) {
      auto b = t.find_first_not_of(" \t\r");
      auto e = t.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    std::string name = trim(line.substr(0, eqpos));
    std::string value = trim(line.substr(eqpos + 1));
    try {
      if (name.empty() || value.empty()) throw std::runtime_error("empty");
      s.set(name, Int(value));
    } catch (const std::exception &) {
      throw Error("malformed binding '" + trim(line) + "'",
                  SourcePos{lineno, static_cast<int>(first) + 1});
    }
  }
  return s;
}

Int aeval(const Store &s, const AExpr &e) {
  switch (e->kind) {
  case AKind::IntLit:
    return e->value;
  case AKind::Var:
    return s.get(e->name);
  case AKind::Neg:
    return -aeval(s, e->lhs);
  case AKind::Bin: {
    Int l = aeval(s, e->lhs);
    Int r = aeval(s, e->rhs);
    switch (e->bin) {
    case BinOp::Add: return l + r;
    case BinOp::Sub: return l - r;
    case BinOp::Mul: return l * r;
    }
    break;
  }
  default:
    break;
  }
  throw UnsupportedNode("fixed-width operation in unbounded arithmetic", e->pos);
}

bool beval(const Store &s, const BExpr &b) {
  switch (b->kind) {
  case BKind::BoolLit:
    return b->value;
  case BKind::Cmp: {
    Int l = aeval(s, b->alhs);
    Int r = aeval(s, b->arhs);
    switch (b->cmp) {
    case CmpOp::Eq: return l == r;
    case CmpOp::Le: return l <= r;
    case CmpOp::Lt: return l < r;
    }
    break;
  }
  case BKind::Not:
    return !beval(s, b->lhs);
  case BKind::And:
    return beval(s, b->lhs) && beval(s, b->rhs);
  case BKind::Or:
    return beval(s, b->lhs) || beval(s, b->rhs);
  case BKind::Implies:
    return !beval(s, b->lhs) || beval(s, b->rhs);
  }
  return false;
}

namespace {

// Returns false when the budget runs out. Loops iterate in place so that
// deep iteration counts do not translate into native recursion depth.
bool exec(Fuel &fuel, const Com &c, Store &s) {
  switch (c->kind) {
  case CKind::Skip:
    return true;
  case CKind::Assign:
    s.set(c->name, aeval(s, c->rhs));
    return true;
  case CKind::Seq:
    return exec(fuel, c->first, s) && exec(fuel, c->second, s);
  case CKind::If:
    return exec(fuel, beval(s, c->cond) ? c->first : c->second, s);
  case CKind::While:
    for (;;) {
      if (fuel == 0) return false;
      --fuel;
      if (!beval(s, c->cond)) return true;
      if (!exec(fuel, c->first, s)) return false;
    }
  }
  return true;
}

}  // namespace

Outcome ceval_fuel(Fuel fuel, const Com &c, const Store &s) {
  Store st = s;
  if (!exec(fuel, c, st)) return OutOfFuel{};
  return Done{std::move(st)};
}

StepResult step(const Com &c, const Store &s) {
  switch (c->kind) {
  case CKind::Skip:
    return Terminal{};
  case CKind::Assign: {
    Store next = s;
    next.set(c->name, aeval(s, c->rhs));
    return Next{skip(), std::move(next)};
  }
  case CKind::Seq: {
    if (c->first->kind == CKind::Skip) return Next{c->second, s};
    auto r = step(c->first, s);
    auto &n = std::get<Next>(r);  // first is not Skip, so it can step
    return Next{seq(n.com, c->second), std::move(n.store)};
  }
  case CKind::If:
    return Next{beval(s, c->cond) ? c->first : c->second, s};
  case CKind::While:
    return Next{if_(c->cond, seq(c->first, c), skip()), s};
  }
  return Terminal{};
}

Outcome run_small(std::uint64_t max_steps, const Com &c, const Store &s) {
  Com cur = c;
  Store st = s;
  for (std::uint64_t i = 0;; ++i) {
    if (cur->kind == CKind::Skip) return Done{std::move(st)};
    if (i == max_steps) return OutOfFuel{};
    auto r = step(cur, st);
    auto &n = std::get<Next>(r);
    cur = std::move(n.com);
    st = std::move(n.store);
  }
}

}  // namespace imp
