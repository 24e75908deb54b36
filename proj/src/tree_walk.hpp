#pragma once

#include <utility>
#include <vector>

#include "cladecheck/tree.hpp"

namespace cladecheck::detail {

struct Visit {
  int node;
  int parent_edge;  // -1 at the start node
};

/// Depth-first pre-order from `start`, never crossing `blocked_edge`.
/// Children are visited in ascending edge-id order.
inline std::vector<Visit> preorder(const Tree& tree, int start, int blocked_edge = -1) {
  std::vector<Visit> out;
  out.reserve(tree.node_count());
  std::vector<Visit> stack{{start, -1}};
  while (!stack.empty()) {
    const Visit v = stack.back();
    stack.pop_back();
    out.push_back(v);
    const auto inc = tree.incident(v.node);
    for (auto it = inc.rbegin(); it != inc.rend(); ++it) {
      const int e = *it;
      if (e == v.parent_edge || e == blocked_edge) continue;
      stack.push_back({tree.other_end(e, v.node), e});
    }
  }
  return out;
}

}  // namespace cladecheck::detail
