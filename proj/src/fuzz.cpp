#include "imp/fuzz.hpp"

#include <array>
#include <sstream>

#include "imp/frontend.hpp"
#include "imp/mips.hpp"
#include "imp/stack_machine.hpp"

namespace imp::fuzz {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void flatten_seq(const Com &c, std::vector<Com> &out) {
  if (c->kind == CKind::Seq) {
    flatten_seq(c->first, out);
    flatten_seq(c->second, out);
  } else if (c->kind != CKind::Skip) {
    out.push_back(c);
  }
}

// Right-nested sequence without Skip elements.
Com sequence(const std::vector<Com> &parts) {
  std::vector<Com> flat;
  for (const auto &c : parts) flatten_seq(c, flat);
  return seq(flat);
}

constexpr std::array<Word32, 6> kEdgeWords = {0u, 1u, 0xFFFFFFFFu, 0x80000000u, 0x7FFFFFFFu, 0xFFFFu};

}  // namespace

Fuel fuel_bound(const GenSpec &spec) {
  Fuel bound = 1;
  for (int d = 0; d < spec.max_depth; ++d) bound *= 2 * static_cast<Fuel>(spec.max_loop_bound + 2);
  return bound;
}

Generator::Generator(const GenSpec &spec) : spec_(spec), rng_(spec.seed) {
  for (int i = 0; i < spec.pool_size; ++i) {
    std::string name(1, static_cast<char>('a' + i));
    if (name == "i") name = "z";
    pool_.push_back(name);
  }
  if (spec.typed) {
    for (std::size_t i = 0; i < pool_.size(); ++i)
      types_[pool_[i]] = i < 2 ? (i == 0 ? Ty::U32 : Ty::I32) : (chance(50) ? Ty::U32 : Ty::I32);
  }
}

AExpr Generator::literal() { return lit(Int(below(10))); }

AExpr Generator::leaf() {
  if (chance(35)) {
    AExpr l = literal();
    return chance(15) ? neg(l) : l;
  }
  std::vector<std::string> names = pool_;
  for (int l = 1; l <= loop_level_; ++l) names.push_back(counter(l));
  return var(names[below(names.size())]);
}

AExpr Generator::aexp(int depth) { return expr(depth); }

AExpr Generator::expr(int depth) {
  if (depth <= 1 || chance(25)) return leaf();
  switch (below(5)) {
  case 0: return add(expr(depth - 1), expr(depth - 1));
  case 1: return sub(expr(depth - 1), expr(depth - 1));
  case 2: return neg(expr(depth - 1));
  case 3: {
    // Keep growth polynomial: the right factor is a small literal or a counter.
    AExpr factor = loop_level_ > 0 && chance(30) ? var(counter(1 + static_cast<int>(below(loop_level_))))
                                                 : lit(Int(below(4)));
    return mul(expr(depth - 1), factor);
  }
  default: return add(expr(depth - 1), leaf());
  }
}

AExpr Generator::typed_aexp(Ty ty, int depth) {
  Ty other = ty == Ty::I32 ? Ty::U32 : Ty::I32;
  if (depth <= 1 || chance(25)) {
    std::vector<std::string> names;
    for (const auto &[n, t] : types_)
      if (t == ty) names.push_back(n);
    if (ty == Ty::I32)
      for (int l = 1; l <= loop_level_; ++l) names.push_back(counter(l));
    std::uint64_t pick = below(10);
    if (pick < 4 || names.empty()) {
      if (chance(25)) {
        Word32 w = kEdgeWords[below(kEdgeWords.size())];
        if (ty == Ty::I32 && as_signed(w) < 0) return neg(lit(-Int(as_signed(w))));
        return lit(Int(w));
      }
      AExpr l = literal();
      return ty == Ty::I32 && chance(20) ? neg(l) : l;
    }
    if (pick < 8) return var(names[below(names.size())]);
    return cast(ty, typed_aexp(other, 1));
  }
  std::uint64_t n = ty == Ty::U32 ? 9 : 5;
  switch (below(n)) {
  case 0: return add(typed_aexp(ty, depth - 1), typed_aexp(ty, depth - 1));
  case 1: return sub(typed_aexp(ty, depth - 1), typed_aexp(ty, depth - 1));
  case 2: return mul(typed_aexp(ty, depth - 1), typed_aexp(ty, depth - 1));
  case 3: return neg(typed_aexp(ty, depth - 1));
  case 4: return cast(ty, typed_aexp(other, depth - 1));
  case 5: return bit(static_cast<BitOp>(below(3)), typed_aexp(ty, depth - 1), typed_aexp(ty, depth - 1));
  case 6: {
    AExpr amount = chance(70) ? lit(Int(below(32))) : typed_aexp(Ty::U32, depth - 1);
    return bit(chance(50) ? BitOp::Shl : BitOp::Shr, typed_aexp(ty, depth - 1), amount);
  }
  case 7: return bit_not(typed_aexp(ty, depth - 1));
  default: return add(typed_aexp(ty, depth - 1), typed_aexp(ty, 1));
  }
}

BExpr Generator::bexp(int depth) { return cond(depth); }

BExpr Generator::cond(int depth) {
  if (depth <= 1 || chance(40)) {
    if (chance(8)) return blit(chance(50));
    auto op = static_cast<CmpOp>(below(3));
    if (!spec_.typed) return cmp(op, expr(2), expr(2));
    Ty t = chance(50) ? Ty::I32 : Ty::U32;
    return cmp(op, typed_aexp(t, 2), typed_aexp(t, 2));
  }
  switch (below(3)) {
  case 0: return bnot(cond(depth - 1));
  case 1: return band(cond(depth - 1), cond(depth - 1));
  default: return bor(cond(depth - 1), cond(depth - 1));
  }
}

Com Generator::assignment() {
  const std::string &x = pool_[below(pool_.size())];
  if (!spec_.typed) return assign(x, expr(3));
  return assign(x, typed_aexp(types_.at(x), 3));
}

Com Generator::straight_line() {
  std::vector<Com> cs;
  std::uint64_t n = 1 + below(3);
  for (std::uint64_t i = 0; i < n; ++i) cs.push_back(assignment());
  return sequence(cs);
}

Com Generator::loop(int depth) {
  int level = ++loop_level_;
  std::string i = counter(level);
  Int bound(below(static_cast<std::uint64_t>(spec_.max_loop_bound) + 1));
  Com body = com(depth - 1);
  --loop_level_;
  return sequence({assign(i, lit(0)),
                   while_(le(var(i), lit(bound)), sequence({body, assign(i, add(var(i), lit(1)))}))});
}

Com Generator::com(int depth) {
  if (depth <= 1) return straight_line();
  switch (below(4)) {
  case 0: return sequence({com(depth - 1), com(depth - 1)});
  case 1: return if_(cond(2), com(depth - 1), com(depth - 1));
  case 2: return loop(depth);
  default: return sequence({assignment(), com(depth - 1)});
  }
}

Program Generator::program() {
  loop_level_ = 0;
  Program p;
  if (spec_.typed) {
    for (const auto &v : pool_)
      p.decls.push_back({v, types_.at(v) == Ty::U32 ? DeclTy::U32 : DeclTy::I32, {}});
    for (int l = 1; l < spec_.max_depth; ++l) p.decls.push_back({counter(l), DeclTy::I32, {}});
  }
  p.body = com(spec_.max_depth);
  return p;
}

Store Generator::store() {
  Store s;
  for (const auto &v : pool_) s.set(v, Int(static_cast<std::int64_t>(below(41)) - 20));
  return s;
}

Store32 Generator::store32() {
  Store32 s;
  for (const auto &v : pool_) {
    std::uint64_t pick = below(10);
    if (pick < 3)
      s[v] = kEdgeWords[below(kEdgeWords.size())];
    else if (pick < 7)
      s[v] = static_cast<Word32>(below(41)) - 20u;
    else
      s[v] = static_cast<Word32>(rng_());
  }
  return s;
}

Program gen_program(const GenSpec &spec) { return Generator(spec).program(); }

// ---------------------------------------------------------------------------
// Engines

std::string_view to_string(EngineResult::Status s) {
  switch (s) {
  case EngineResult::Status::Done: return "Done";
  case EngineResult::Status::OutOfFuel: return "OutOfFuel";
  case EngineResult::Status::Error: return "Error";
  }
  return "?";
}

std::string EngineResult::describe(const Program &p) const {
  if (status == Status::OutOfFuel) return "OutOfFuel";
  if (status == Status::Error) return "error: " + detail;
  if (!p.typed()) return serialize(store);
  TypeEnv env = declared_env(p);
  std::string out;
  for (const auto &[k, w] : words) {
    auto it = env.find(k);
    out += k + "=" + render(w, it == env.end() ? Ty::I32 : it->second) + "\n";
  }
  return out;
}

namespace {

constexpr std::uint64_t kFirstBudget = 1u << 12;
constexpr std::uint64_t kMaxBudget = 1u << 26;

EngineResult out_of_fuel() {
  EngineResult r;
  r.status = EngineResult::Status::OutOfFuel;
  return r;
}

EngineResult error(std::string detail) {
  EngineResult r;
  r.status = EngineResult::Status::Error;
  r.detail = std::move(detail);
  return r;
}

// Retries with doubling budgets until the run finishes or the cap is hit.
template <class F>
EngineResult with_doubling(F &&attempt) {
  for (std::uint64_t budget = kFirstBudget;; budget *= 2) {
    EngineResult r = attempt(budget);
    if (r.status != EngineResult::Status::OutOfFuel || budget >= kMaxBudget) return r;
  }
}

EngineResult from_outcome(const Outcome &o) {
  if (const auto *d = std::get_if<Done>(&o)) {
    EngineResult r;
    r.store = d->store;
    return r;
  }
  return out_of_fuel();
}

EngineResult guarded(const std::function<EngineResult()> &f) {
  try {
    return f();
  } catch (const std::exception &e) {
    return error(e.what());
  }
}

EngineResult run_bigstep(const Case &c) {
  return guarded([&] { return from_outcome(ceval_fuel(c.fuel, c.program.body, c.store)); });
}

EngineResult run_smallstep(const Case &c) {
  return guarded([&] {
    return with_doubling([&](std::uint64_t b) { return from_outcome(run_small(b, c.program.body, c.store)); });
  });
}

EngineResult run_stackvm(const Case &c) {
  return guarded([&] {
    stack::Code code = stack::compile_program(c.program);
    return with_doubling([&](std::uint64_t b) {
      stack::VmOutcome o = stack::vm_exec(b, code, c.store);
      if (const auto *e = std::get_if<stack::MachineError>(&o)) return error(e->reason);
      if (const auto *d = std::get_if<Done>(&o)) return from_outcome(*d);
      return out_of_fuel();
    });
  });
}

EngineResult run_fixed(const Case &c) {
  return guarded([&] {
    TypedProgram tp = typecheck(c.program);
    Outcome32 o = ceval_fixed(c.fuel, tp.program.body, c.words);
    if (const auto *d = std::get_if<Done32>(&o)) {
      EngineResult r;
      r.words = d->store;
      return r;
    }
    return out_of_fuel();
  });
}

EngineResult run_mips(const Case &c, mips::Strategy strategy) {
  return guarded([&] {
    mips::MipsProgram prog = mips::codegen(c.program, {strategy, true});
    return with_doubling([&](std::uint64_t b) {
      mips::SimOutcome o = mips::simulate(prog, c.words, b * 16);
      if (const auto *t = std::get_if<mips::Trap>(&o)) return error(t->reason);
      if (std::holds_alternative<mips::BudgetExhausted>(o)) return out_of_fuel();
      EngineResult r;
      r.words = c.words;
      for (const auto &[k, w] : std::get<mips::Halted>(o).vars) r.words[k] = w;
      return r;
    });
  });
}

bool same_result(const EngineResult &a, const EngineResult &b, bool typed) {
  if (a.status != b.status) return false;
  if (a.status != EngineResult::Status::Done) return true;
  return typed ? same_words(a.words, b.words) : a.store == b.store;
}

std::string store_text(const Case &c) {
  if (!c.program.typed()) return serialize(c.store);
  EngineResult r;
  r.words = c.words;
  return r.describe(c.program);
}

}  // namespace

std::vector<std::string> engine_names(bool typed) {
  if (typed) return {"bigstep", "mips", "mips-naive"};
  return {"bigstep", "smallstep", "stackvm"};
}

Engine make_engine(const std::string &name, bool typed) {
  if (typed) {
    if (name == "bigstep") return {name, run_fixed};
    if (name == "mips") return {name, [](const Case &c) { return run_mips(c, mips::Strategy::RegAlloc); }};
    if (name == "mips-naive") return {name, [](const Case &c) { return run_mips(c, mips::Strategy::Naive); }};
  } else {
    if (name == "bigstep") return {name, run_bigstep};
    if (name == "smallstep") return {name, run_smallstep};
    if (name == "stackvm") return {name, run_stackvm};
  }
  throw std::invalid_argument("engine '" + name + "' is not available in " +
                              (typed ? "typed" : "untyped") + " mode");
}

Case make_case(const GenSpec &spec, std::size_t index) {
  GenSpec s = spec;
  s.seed = splitmix64(spec.seed ^ splitmix64(index));
  Generator g(s);
  Case c;
  c.program = g.program();
  if (spec.typed)
    c.words = g.store32();
  else
    c.store = g.store();
  c.fuel = fuel_bound(spec);
  return c;
}

bool diverges(const Case &c, const std::vector<Engine> &engines) {
  if (engines.empty()) return false;
  EngineResult ref = engines[0].run(c);
  if (ref.status != EngineResult::Status::Done) return false;
  for (std::size_t i = 1; i < engines.size(); ++i)
    if (!same_result(ref, engines[i].run(c), c.program.typed())) return true;
  return false;
}

namespace {

// Every program obtained from `c` by one local reduction.
std::vector<Com> reductions(const Com &c) {
  std::vector<Com> out;
  if (c->kind != CKind::Skip) out.push_back(skip());
  switch (c->kind) {
  case CKind::Skip:
    break;
  case CKind::Assign:
    if (!literal_value(c->rhs)) out.push_back(assign(c->name, lit(0)));
    if (c->rhs->lhs) out.push_back(assign(c->name, c->rhs->lhs));
    if (c->rhs->rhs) out.push_back(assign(c->name, c->rhs->rhs));
    break;
  case CKind::Seq:
    out.push_back(c->first);
    out.push_back(c->second);
    for (const auto &r : reductions(c->first)) out.push_back(sequence({r, c->second}));
    for (const auto &r : reductions(c->second)) out.push_back(sequence({c->first, r}));
    break;
  case CKind::If:
    out.push_back(c->first);
    out.push_back(c->second);
    for (const auto &r : reductions(c->first)) out.push_back(if_(c->cond, r, c->second));
    for (const auto &r : reductions(c->second)) out.push_back(if_(c->cond, c->first, r));
    break;
  case CKind::While:
    for (const auto &r : reductions(c->first)) out.push_back(while_(c->cond, sequence({r}), c->invariant));
    break;
  }
  return out;
}

}  // namespace

Program shrink(const Case &c, const std::vector<Engine> &engines) {
  Case cur = c;
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto &r : reductions(cur.program.body)) {
      if (node_count(r) >= node_count(cur.program.body)) continue;
      Case cand = cur;
      cand.program.body = r;
      if (diverges(cand, engines)) {
        cur = std::move(cand);
        progress = true;
        break;
      }
    }
  }
  return cur.program;
}

DiffReport run_diff(const GenSpec &spec, std::size_t count, const std::vector<Engine> &engines,
                    bool fail_fast) {
  DiffReport report;
  for (std::size_t i = 0; i < count; ++i) {
    Case c = make_case(spec, i);
    ++report.cases;
    std::vector<EngineResult> results;
    for (const auto &e : engines) {
      results.push_back(e.run(c));
      ++report.tallies[e.name][std::string(to_string(results.back().status))];
    }
    if (results.empty() || results[0].status != EngineResult::Status::Done) {
      ++report.skipped;
      continue;
    }
    bool agree = true;
    for (std::size_t k = 1; k < results.size(); ++k)
      agree = agree && same_result(results[0], results[k], spec.typed);
    if (agree) {
      ++report.agreements;
      continue;
    }
    ++report.divergences;
    if (!report.first) {
      Divergence d;
      d.index = i;
      d.program = pretty(c.program);
      d.store = store_text(c);
      for (std::size_t k = 0; k < results.size(); ++k)
        d.outputs.emplace_back(engines[k].name, results[k].describe(c.program));
      d.witness = pretty(shrink(c, engines));
      report.first = std::move(d);
    }
    if (fail_fast) break;
  }
  return report;
}

std::string DiffReport::summary() const {
  std::ostringstream out;
  out << "cases=" << cases << " agreements=" << agreements << " divergences=" << divergences
      << " skipped=" << skipped << "\n";
  for (const auto &[engine, counts] : tallies) {
    out << "  " << engine << ":";
    for (const auto &[status, n] : counts) out << " " << status << "=" << n;
    out << "\n";
  }
  if (first) {
    out << "first divergence at case " << first->index << "\n";
    out << "program:\n" << first->program;
    out << "store:\n" << first->store;
    for (const auto &[engine, text] : first->outputs) out << engine << ":\n" << text << "\n";
    out << "minimal witness:\n" << first->witness;
  }
  return out.str();
}

}  // namespace imp::fuzz
