#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "imp/ast.hpp"
#include "imp/semantics.hpp"
#include "imp/typecheck.hpp"

// Random program generation and the differential-testing loop.

namespace imp::fuzz {

struct GenSpec {
  std::uint64_t seed = 0;
  int max_depth = 3;       // command nesting; 1 gives straight-line code
  int max_loop_bound = 4;  // loops run `i <= K` with K in [0, max_loop_bound]
  int pool_size = 3;       // ordinary variables a, b, c, ...
  bool typed = false;
};

/// Upper bound on the loop tests a program generated from `spec` performs.
Fuel fuel_bound(const GenSpec &spec);

class Generator {
public:
  explicit Generator(const GenSpec &spec);

  Program program();
  Com com(int depth);
  /// Untyped core expression over the variable pool.
  AExpr aexp(int depth);
  /// Untyped Boolean expression over core comparisons.
  BExpr bexp(int depth);
  /// Expression of type `ty` (typed mode vocabulary: casts and bit operations).
  AExpr typed_aexp(Ty ty, int depth);

  Store store();
  Store32 store32();

  const std::vector<std::string> &pool() const { return pool_; }
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

private:
  bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }
  AExpr literal();
  AExpr leaf();
  AExpr expr(int depth);
  BExpr cond(int depth);
  Com straight_line();
  Com loop(int depth);
  Com assignment();
  std::string counter(int level) const { return "i" + std::to_string(level); }

  GenSpec spec_;
  std::mt19937_64 rng_;
  std::vector<std::string> pool_;
  std::map<std::string, Ty> types_;
  int loop_level_ = 0;  // number of enclosing generated loops
};

/// Deterministic program for a spec; identical specs give identical programs.
Program gen_program(const GenSpec &spec);

/// Final state of one engine run.
struct EngineResult {
  enum class Status { Done, OutOfFuel, Error };
  Status status = Status::Done;
  Store store;      // untyped runs
  Store32 words;    // typed runs
  std::string detail;

  std::string describe(const Program &p) const;
};

std::string_view to_string(EngineResult::Status s);

struct Case {
  Program program;
  Store store;
  Store32 words;
  Fuel fuel = 0;  // loop-test budget that suffices for the program
};

struct Engine {
  std::string name;
  std::function<EngineResult(const Case &)> run;
};

/// Built-in engines: bigstep, smallstep, stackvm (untyped), bigstep and mips,
/// mips-naive (typed).
Engine make_engine(const std::string &name, bool typed);
std::vector<std::string> engine_names(bool typed);

struct Divergence {
  std::size_t index = 0;
  std::string program;
  std::string store;
  std::vector<std::pair<std::string, std::string>> outputs;
  std::string witness;  // program shrunk while the disagreement persists
};

struct DiffReport {
  std::size_t cases = 0;
  std::size_t agreements = 0;
  std::size_t divergences = 0;
  std::size_t skipped = 0;
  std::map<std::string, std::map<std::string, std::size_t>> tallies;
  std::optional<Divergence> first;

  std::string summary() const;
};

/// Case `index` of a run: the program and store come from the spec seed mixed
/// with the index.
Case make_case(const GenSpec &spec, std::size_t index);

/// Runs `count` cases through every engine. The first engine is the reference;
/// cases where it does not finish are skipped.
DiffReport run_diff(const GenSpec &spec, std::size_t count, const std::vector<Engine> &engines,
                    bool fail_fast = false);

/// Greedy command-level reduction of a diverging case.
Program shrink(const Case &c, const std::vector<Engine> &engines);

/// True when the engines disagree on `c` while the reference finishes.
bool diverges(const Case &c, const std::vector<Engine> &engines);

}  // namespace imp::fuzz
