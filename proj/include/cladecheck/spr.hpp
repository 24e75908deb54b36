#pragma once

#include <cmath>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cladecheck/tree.hpp"

namespace cladecheck {

/// Allen-Steel classification of a regraft by how far the destination edge
/// is from the cut edge.
enum class SprType {
  kAdjacent = 1,  // type i: same topology as before
  kOneAway = 2,   // type ii: an NNI
  kDistant = 3,   // type iii
};

const char* to_string(SprType type);

/// Cut `cut_edge`, keep the subtree on the `pruned_node` side, regraft it on
/// `target_edge` (an edge of the other side).
struct SprMove {
  int cut_edge;
  int pruned_node;
  int target_edge;
  SprType type;

  bool operator==(const SprMove&) const = default;
};

/// Every (cut edge, destination edge) pair, both directions of each cut:
/// (2m-3)(2m-4) moves, of which 6(m-2) adjacent, 8(m-3) one-away and
/// 4(m-3)(m-4) distant. Requires m >= 4.
std::vector<SprMove> enumerate_moves(const Tree& tree);

/// Applies a one-away or distant move. The pruned subtree keeps its pendant
/// length, the two edges left at the prune point merge into one of summed
/// length, and the destination edge is split at its midpoint.
Tree apply_move_plain(const Tree& tree, const SprMove& move);

/// Exact small rational.
struct Weight {
  int numerator = 1;
  int denominator = 1;

  double value() const { return static_cast<double>(numerator) / denominator; }
  double log_value() const { return std::log(value()); }
  bool operator==(const Weight&) const = default;
};

struct WeightedNeighbor {
  Tree tree;
  Weight weight;
  std::optional<SprMove> move;  // empty for the tree itself
};

/// The tree itself (weight 1), every one-away result (weight 1/4; each such
/// topology arises from four moves) and every distant result (weight 1).
std::vector<WeightedNeighbor> neighborhood_plain(const Tree& tree);

/// The tree itself followed by its 2(m-3)(2m-7) distinct SPR neighbours,
/// deduplicated by topology. Each neighbour keeps the midpoint lengths of the
/// first move that produced it.
std::vector<Tree> neighborhood_unique(const Tree& tree);

/// The 2(m-3) distinct NNI neighbours.
std::vector<Tree> enumerate_nni(const Tree& tree);

/// NNI distance by breadth-first search over topologies, or nullopt when it
/// exceeds `cap`. Practical for m <= 7.
std::optional<int> nni_distance(const Tree& from, const Tree& to, int cap);

/// NNI distance from `origin` to every topology within `cap` moves.
std::unordered_map<CanonicalTopology, int, CanonicalHash> nni_distances(const Tree& origin,
                                                                        int cap);

}  // namespace cladecheck
