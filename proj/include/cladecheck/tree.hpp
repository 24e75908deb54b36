#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cladecheck {

/// Thrown for malformed tree or alignment input. `position` is a byte
/// offset (Newick) or a line number (FASTA/PHYLIP).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

struct Edge {
  int a = 0;
  int b = 0;
  double length = 0.0;  // expected substitutions per site
};

/// Unrooted binary leaf-labelled tree.
///
/// Nodes `0 .. m-1` are the leaves in label-list order, nodes `m ..` are
/// internal. Every internal node has degree 3, every leaf degree 1. The
/// degenerate two-leaf tree (a single edge) is accepted so that likelihood
/// code can be exercised on the closed-form case. Trees are immutable; the
/// `with_*` members return modified copies.
class Tree {
 public:
  Tree(std::vector<std::string> labels, std::vector<Edge> edges);

  std::size_t leaf_count() const noexcept { return labels_.size(); }
  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool is_leaf(int node) const noexcept {
    return node < static_cast<int>(labels_.size());
  }

  std::span<const std::string> labels() const noexcept { return labels_; }
  const std::string& label(int leaf) const { return labels_.at(leaf); }
  /// Leaf node with the given label, or -1.
  int find_leaf(std::string_view label) const noexcept;

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  /// Edge ids incident to `node`, in ascending order.
  std::span<const int> incident(int node) const { return adjacency_.at(node); }
  int other_end(int e, int node) const {
    const Edge& ed = edges_[e];
    return ed.a == node ? ed.b : ed.a;
  }
  /// Edge joining `u` and `v`, or -1.
  int edge_between(int u, int v) const noexcept;

  std::vector<double> lengths() const;
  double total_length() const noexcept;

  Tree with_length(int e, double length) const;
  Tree with_lengths(std::span<const double> lengths) const;

 private:
  void validate() const;

  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Bipartition of the leaf set, stored as a bitset over the sorted label
/// list. The side that does not contain the smallest label is stored.
using Split = std::vector<std::uint64_t>;

/// Topology identity of an unrooted tree: its sorted label set and the set
/// of non-trivial splits. Equal iff the topologies are equal.
struct CanonicalTopology {
  std::vector<std::string> labels;
  std::vector<Split> splits;

  auto operator<=>(const CanonicalTopology&) const = default;
  bool operator==(const CanonicalTopology&) const = default;
};

CanonicalTopology canonical(const Tree& tree);

struct CanonicalHash {
  std::size_t operator()(const CanonicalTopology& topology) const noexcept;
};

Tree parse_newick(std::string_view text);

/// Unrooted Newick with a trifurcation at the internal node next to the
/// leaf with the smallest label; children ordered by smallest leaf label.
std::string write_newick(const Tree& tree, bool with_lengths = true);

/// Newick text without branch lengths; a total order on topologies.
inline std::string topology_string(const Tree& tree) {
  return write_newick(tree, false);
}

/// Fully balanced tree with 2^levels leaves "S1".."S<2^levels>", every
/// branch 0.05.
Tree balanced_tree(int levels);

/// balanced_tree(levels) plus a two-leaf cherry hung from its root by a
/// branch of length `long_branch`.
Tree c_tree(int levels, double long_branch = 2.0);

/// (2m-5)!!, the number of unrooted binary topologies on m leaves. Throws
/// std::overflow_error when the value does not fit in 64 bits (m > 19).
std::uint64_t count_topologies(int species);

/// Throws std::invalid_argument when a tree and another object disagree on
/// leaf labels.
void require_same_leaves(const Tree& a, std::span<const std::string> labels);

}  // namespace cladecheck
