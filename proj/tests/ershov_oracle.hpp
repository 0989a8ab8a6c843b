#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <vector>

#include "imp/ast.hpp"

namespace testing {

// Minimum over all evaluation orders of an expression tree of the peak number
// of simultaneously held values. A leaf occupies a fresh register; an operator
// consumes its operands and reuses one of their registers. Neg e counts as
// 0 - e. Dynamic programming over the order ideals of the tree: the state is
// the set of evaluated nodes, whose live values are the evaluated nodes with
// an unevaluated parent.
class OrderOracle {
public:
  int min_registers(const imp::AExpr &e) {
    parent_.clear();
    children_.clear();
    add(e, -1);
    const int n = static_cast<int>(parent_.size());
    const std::uint32_t full = (1u << n) - 1;
    std::vector<int> best(full + 1, INT_MAX);
    best[0] = 0;
    for (std::uint32_t s = 0; s < full; ++s) {
      if (best[s] == INT_MAX) continue;
      for (int v = 0; v < n; ++v) {
        if (s >> v & 1u) continue;
        bool ready = true;
        for (int c : children_[static_cast<std::size_t>(v)]) ready = ready && (s >> c & 1u);
        if (!ready) continue;
        std::uint32_t t = s | (1u << v);
        int peak = std::max(best[s], live(t));
        best[t] = std::min(best[t], peak);
      }
    }
    return best[full];
  }

private:
  int add(const imp::AExpr &e, int parent) {
    int id = static_cast<int>(parent_.size());
    parent_.push_back(parent);
    children_.emplace_back();
    if (e->kind == imp::AKind::Neg) {
      int zero = static_cast<int>(parent_.size());
      parent_.push_back(id);
      children_.emplace_back();
      children_[static_cast<std::size_t>(id)].push_back(zero);
      children_[static_cast<std::size_t>(id)].push_back(add(e->lhs, id));
    } else if (e->kind == imp::AKind::Bin) {
      int l = add(e->lhs, id);
      int r = add(e->rhs, id);
      children_[static_cast<std::size_t>(id)] = {l, r};
    }
    return id;
  }

  int live(std::uint32_t s) const {
    int n = 0;
    for (std::size_t v = 0; v < parent_.size(); ++v)
      if ((s >> v & 1u) && (parent_[v] < 0 || !(s >> parent_[v] & 1u))) ++n;
    return n;
  }

  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
};

// Every expression of depth <= max_depth (a leaf has depth 1) over the
// operators + - * and the given leaves, grouped by exact depth.
inline std::vector<std::vector<imp::AExpr>> all_trees(int max_depth, const std::vector<imp::AExpr> &leaves) {
  std::vector<std::vector<imp::AExpr>> by_depth(static_cast<std::size_t>(max_depth) + 1);
  by_depth[1] = leaves;
  std::vector<imp::AExpr> upto = leaves;
  for (int d = 2; d <= max_depth; ++d) {
    auto &out = by_depth[static_cast<std::size_t>(d)];
    // upto[shallow..] are the trees of depth exactly d-1; one child must be among them.
    std::size_t shallow = upto.size() - by_depth[static_cast<std::size_t>(d - 1)].size();
    for (imp::BinOp op : {imp::BinOp::Add, imp::BinOp::Sub, imp::BinOp::Mul})
      for (std::size_t i = 0; i < upto.size(); ++i)
        for (std::size_t j = 0; j < upto.size(); ++j)
          if (i >= shallow || j >= shallow) out.push_back(imp::bin(op, upto[i], upto[j]));
    upto.insert(upto.end(), out.begin(), out.end());
  }
  return by_depth;
}

}  // namespace testing
