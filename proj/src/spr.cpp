#include "cladecheck/spr.hpp"

#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "tree_walk.hpp"

namespace cladecheck {

const char* to_string(SprType type) {
  switch (type) {
    case SprType::kAdjacent: return "i";
    case SprType::kOneAway: return "ii";
    case SprType::kDistant: return "iii";
  }
  return "?";
}

namespace {

void require_spr_size(const Tree& tree) {
  if (tree.leaf_count() < 4) throw std::invalid_argument("SPR operations need at least 4 leaves");
}

SprType type_for_depth(int depth) {
  // depth of the destination edge's far endpoint below the attach node
  if (depth <= 1) return SprType::kAdjacent;
  if (depth == 2) return SprType::kOneAway;
  return SprType::kDistant;
}

}  // namespace

std::vector<SprMove> enumerate_moves(const Tree& tree) {
  require_spr_size(tree);
  std::vector<SprMove> moves;
  const std::size_t m = tree.leaf_count();
  moves.reserve((2 * m - 3) * (2 * m - 4));
  std::vector<int> depth(tree.node_count(), 0);
  for (std::size_t e = 0; e < tree.edge_count(); ++e) {
    const int cut = static_cast<int>(e);
    for (int pruned : {tree.edge(cut).b, tree.edge(cut).a}) {
      const int attach = tree.other_end(cut, pruned);
      if (tree.is_leaf(attach)) continue;
      for (const auto& visit : detail::preorder(tree, attach, cut)) {
        if (visit.parent_edge < 0) {
          depth[visit.node] = 0;
          continue;
        }
        depth[visit.node] = depth[tree.other_end(visit.parent_edge, visit.node)] + 1;
        moves.push_back({cut, pruned, visit.parent_edge, type_for_depth(depth[visit.node])});
      }
    }
  }
  return moves;
}

Tree apply_move_plain(const Tree& tree, const SprMove& move) {
  require_spr_size(tree);
  if (move.type == SprType::kAdjacent) {
    throw std::invalid_argument("adjacent (type i) moves leave the topology unchanged");
  }
  const int n_edges = static_cast<int>(tree.edge_count());
  if (move.cut_edge < 0 || move.cut_edge >= n_edges || move.target_edge < 0 ||
      move.target_edge >= n_edges || move.target_edge == move.cut_edge) {
    throw std::invalid_argument("SPR move refers to invalid edges");
  }
  const Edge& cut = tree.edge(move.cut_edge);
  if (cut.a != move.pruned_node && cut.b != move.pruned_node) {
    throw std::invalid_argument("pruned node is not an endpoint of the cut edge");
  }
  const int attach = tree.other_end(move.cut_edge, move.pruned_node);
  if (tree.is_leaf(attach)) throw std::invalid_argument("nothing left to regraft onto");

  int depth_of_target = -1;
  {
    std::vector<int> depth(tree.node_count(), 0);
    for (const auto& visit : detail::preorder(tree, attach, move.cut_edge)) {
      if (visit.parent_edge < 0) continue;
      depth[visit.node] = depth[tree.other_end(visit.parent_edge, visit.node)] + 1;
      if (visit.parent_edge == move.target_edge) depth_of_target = depth[visit.node];
    }
  }
  if (depth_of_target < 0) {
    throw std::invalid_argument("destination edge lies inside the pruned subtree");
  }
  if (type_for_depth(depth_of_target) != move.type) {
    throw std::invalid_argument("SPR move type does not match its edges");
  }

  int merged[2];
  int k = 0;
  for (int e : tree.incident(attach)) {
    if (e != move.cut_edge) merged[k++] = e;
  }
  const int left = tree.other_end(merged[0], attach);
  const int right = tree.other_end(merged[1], attach);
  const Edge& target = tree.edge(move.target_edge);
  const double half = target.length / 2.0;

  std::vector<Edge> edges(tree.edges().begin(), tree.edges().end());
  edges[merged[0]] = {left, right, tree.edge(merged[0]).length + tree.edge(merged[1]).length};
  edges[merged[1]] = {target.a, attach, half};
  edges[move.target_edge] = {attach, target.b, half};
  return Tree(std::vector<std::string>(tree.labels().begin(), tree.labels().end()),
              std::move(edges));
}

std::vector<WeightedNeighbor> neighborhood_plain(const Tree& tree) {
  require_spr_size(tree);
  std::vector<WeightedNeighbor> out;
  out.push_back({tree, Weight{1, 1}, std::nullopt});
  for (const SprMove& move : enumerate_moves(tree)) {
    if (move.type == SprType::kAdjacent) continue;
    const Weight w = move.type == SprType::kOneAway ? Weight{1, 4} : Weight{1, 1};
    out.push_back({apply_move_plain(tree, move), w, move});
  }
  return out;
}

std::vector<Tree> neighborhood_unique(const Tree& tree) {
  require_spr_size(tree);
  std::vector<Tree> out{tree};
  std::unordered_set<CanonicalTopology, CanonicalHash> seen{canonical(tree)};
  for (const SprMove& move : enumerate_moves(tree)) {
    if (move.type == SprType::kAdjacent) continue;
    Tree next = apply_move_plain(tree, move);
    if (seen.insert(canonical(next)).second) out.push_back(std::move(next));
  }
  return out;
}

std::vector<Tree> enumerate_nni(const Tree& tree) {
  require_spr_size(tree);
  std::vector<Tree> out;
  std::unordered_set<CanonicalTopology, CanonicalHash> seen{canonical(tree)};
  for (const SprMove& move : enumerate_moves(tree)) {
    if (move.type != SprType::kOneAway) continue;
    Tree next = apply_move_plain(tree, move);
    if (seen.insert(canonical(next)).second) out.push_back(std::move(next));
  }
  return out;
}

std::unordered_map<CanonicalTopology, int, CanonicalHash> nni_distances(const Tree& origin,
                                                                        int cap) {
  require_spr_size(origin);
  std::unordered_map<CanonicalTopology, int, CanonicalHash> dist{{canonical(origin), 0}};
  std::deque<std::pair<Tree, int>> queue{{origin, 0}};
  while (!queue.empty()) {
    auto [tree, d] = std::move(queue.front());
    queue.pop_front();
    if (d >= cap) continue;
    for (Tree& next : enumerate_nni(tree)) {
      if (dist.try_emplace(canonical(next), d + 1).second) queue.emplace_back(std::move(next), d + 1);
    }
  }
  return dist;
}

std::optional<int> nni_distance(const Tree& from, const Tree& to, int cap) {
  require_same_leaves(from, to.labels());
  const CanonicalTopology goal = canonical(to);
  if (canonical(from) == goal) return 0;
  std::unordered_set<CanonicalTopology, CanonicalHash> seen{canonical(from)};
  std::deque<std::pair<Tree, int>> queue{{from, 0}};
  while (!queue.empty()) {
    auto [tree, d] = std::move(queue.front());
    queue.pop_front();
    if (d >= cap) continue;
    for (Tree& next : enumerate_nni(tree)) {
      CanonicalTopology key = canonical(next);
      if (key == goal) return d + 1;
      if (seen.insert(std::move(key)).second) queue.emplace_back(std::move(next), d + 1);
    }
  }
  return std::nullopt;
}

}  // namespace cladecheck
