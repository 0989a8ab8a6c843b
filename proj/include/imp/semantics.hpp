#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "imp/ast.hpp"

namespace imp {

/// Total map from variable names to unbounded integers. Names without an
/// explicit binding read as 0, and equality compares the induced functions.
class Store {
public:
  Store() = default;
  Store(std::initializer_list<std::pair<const std::string, Int>> init) : bindings_(init) {}

  Int get(const std::string &name) const {
    auto it = bindings_.find(name);
    return it == bindings_.end() ? Int(0) : it->second;
  }
  void set(const std::string &name, Int value) { bindings_[name] = std::move(value); }

  const std::map<std::string, Int> &bindings() const { return bindings_; }

  friend bool operator==(const Store &a, const Store &b);

private:
  std::map<std::string, Int> bindings_;
};

/// `name=value` lines, names sorted, values in decimal.
std::string serialize(const Store &s);
/// Inverse of serialize; blank lines and `//` comments are skipped.
Store parse_store(std::string_view text);

/// Fuel is an iteration budget: each evaluation of a loop test consumes one unit.
using Fuel = std::uint64_t;

struct OutOfFuel {
  friend bool operator==(const OutOfFuel &, const OutOfFuel &) = default;
};

struct Done {
  Store store;
  friend bool operator==(const Done &, const Done &) = default;
};

using Outcome = std::variant<Done, OutOfFuel>;

inline bool is_done(const Outcome &o) { return std::holds_alternative<Done>(o); }

Int aeval(const Store &s, const AExpr &e);
bool beval(const Store &s, const BExpr &b);

/// Big-step evaluation with an explicit iteration budget.
Outcome ceval_fuel(Fuel fuel, const Com &c, const Store &s);

struct Terminal {};
struct Next {
  Com com;
  Store store;
};
using StepResult = std::variant<Next, Terminal>;

/// One small-step transition. Expressions are evaluated atomically.
StepResult step(const Com &c, const Store &s);

/// Reflexive-transitive closure of `step`, bounded by `max_steps` transitions.
Outcome run_small(std::uint64_t max_steps, const Com &c, const Store &s);

}  // namespace imp
