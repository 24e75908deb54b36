#include "cladecheck/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "tree_walk.hpp"

namespace cladecheck {

Tree::Tree(std::vector<std::string> labels, std::vector<Edge> edges)
    : labels_(std::move(labels)), edges_(std::move(edges)) {
  const std::size_t m = labels_.size();
  if (m < 2) throw std::invalid_argument("tree needs at least two leaves");
  const std::size_t nodes = m == 2 ? 2 : 2 * m - 2;
  if (edges_.size() != 2 * m - 3) {
    throw std::invalid_argument("unrooted binary tree on " + std::to_string(m) +
                                " leaves needs " + std::to_string(2 * m - 3) +
                                " edges, got " + std::to_string(edges_.size()));
  }
  adjacency_.resize(nodes);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.a < 0 || ed.b < 0 || static_cast<std::size_t>(ed.a) >= nodes ||
        static_cast<std::size_t>(ed.b) >= nodes || ed.a == ed.b) {
      throw std::invalid_argument("edge " + std::to_string(e) + " has invalid endpoints");
    }
    adjacency_[ed.a].push_back(static_cast<int>(e));
    adjacency_[ed.b].push_back(static_cast<int>(e));
  }
  validate();
}

void Tree::validate() const {
  const std::size_t m = labels_.size();
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw std::invalid_argument("empty leaf label");
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate leaf label '" + l + "'");
  }
  for (const Edge& ed : edges_) {
    if (!std::isfinite(ed.length) || ed.length < 0.0) {
      throw std::invalid_argument("branch lengths must be finite and non-negative");
    }
  }
  for (std::size_t v = 0; v < adjacency_.size(); ++v) {
    const std::size_t want = v < m ? 1 : 3;
    if (adjacency_[v].size() != want) {
      throw std::invalid_argument("node " + std::to_string(v) + " has degree " +
                                  std::to_string(adjacency_[v].size()) + ", expected " +
                                  std::to_string(want));
    }
  }
  // 2m-3 edges on 2m-2 nodes: connected iff acyclic.
  std::vector<char> seen_node(adjacency_.size(), 0);
  std::vector<int> stack{0};
  seen_node[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : adjacency_[v]) {
      const int w = other_end(e, v);
      if (!seen_node[w]) {
        seen_node[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != adjacency_.size()) throw std::invalid_argument("tree is not connected");
}

int Tree::find_leaf(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

int Tree::edge_between(int u, int v) const noexcept {
  for (int e : adjacency_[u]) {
    if (other_end(e, u) == v) return e;
  }
  return -1;
}

std::vector<double> Tree::lengths() const {
  std::vector<double> out(edges_.size());
  std::transform(edges_.begin(), edges_.end(), out.begin(),
                 [](const Edge& e) { return e.length; });
  return out;
}

double Tree::total_length() const noexcept {
  return std::accumulate(edges_.begin(), edges_.end(), 0.0,
                         [](double s, const Edge& e) { return s + e.length; });
}

Tree Tree::with_length(int e, double length) const {
  if (!std::isfinite(length) || length < 0.0) {
    throw std::invalid_argument("branch lengths must be finite and non-negative");
  }
  Tree copy = *this;
  copy.edges_.at(e).length = length;
  return copy;
}

Tree Tree::with_lengths(std::span<const double> lengths) const {
  if (lengths.size() != edges_.size()) throw std::invalid_argument("length vector size mismatch");
  Tree copy = *this;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!std::isfinite(lengths[e]) || lengths[e] < 0.0) {
      throw std::invalid_argument("branch lengths must be finite and non-negative");
    }
    copy.edges_[e].length = lengths[e];
  }
  return copy;
}

CanonicalTopology canonical(const Tree& tree) {
  const std::size_t m = tree.leaf_count();
  CanonicalTopology out;
  out.labels.assign(tree.labels().begin(), tree.labels().end());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return tree.label(x) < tree.label(y); });
  std::vector<int> rank(m);
  for (std::size_t r = 0; r < m; ++r) {
    rank[order[r]] = static_cast<int>(r);
    out.labels[r] = tree.label(order[r]);
  }

  // Rooting at the smallest-label leaf means no stored side contains it.
  const std::size_t words = (m + 63) / 64;
  const auto walk = detail::preorder(tree, order[0]);
  std::vector<Split> below(tree.node_count(), Split(words, 0));
  for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
    const auto [node, parent_edge] = *it;
    if (tree.is_leaf(node)) {
      below[node][rank[node] / 64] |= std::uint64_t{1} << (rank[node] % 64);
    }
    if (parent_edge < 0) continue;
    const int parent = tree.other_end(parent_edge, node);
    for (std::size_t w = 0; w < words; ++w) below[parent][w] |= below[node][w];
    if (!tree.is_leaf(node) && !tree.is_leaf(parent)) out.splits.push_back(below[node]);
  }
  std::sort(out.splits.begin(), out.splits.end());
  return out;
}

std::size_t CanonicalHash::operator()(const CanonicalTopology& topology) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& l : topology.labels) mix(std::hash<std::string>{}(l));
  for (const auto& s : topology.splits) {
    for (auto w : s) mix(static_cast<std::size_t>(w));
  }
  return h;
}

namespace {

constexpr double kDefaultLength = 0.05;

// Appends a rooted balanced subtree with 2^levels leaves; returns the node
// id of its root.
int grow_balanced(int levels, std::vector<std::string>& labels, std::vector<Edge>& edges,
                  int& next_internal) {
  if (levels == 0) {
    const int leaf = static_cast<int>(labels.size());
    labels.push_back("S" + std::to_string(leaf + 1));
    return leaf;
  }
  const int node = next_internal++;
  for (int side = 0; side < 2; ++side) {
    const int child = grow_balanced(levels - 1, labels, edges, next_internal);
    edges.push_back({node, child, kDefaultLength});
  }
  return node;
}

// Internal ids are allocated from a provisional range and shifted once the
// leaf count is known.
constexpr int kProvisional = 1 << 20;

Tree assemble(std::vector<std::string> labels, std::vector<Edge> edges) {
  const int m = static_cast<int>(labels.size());
  for (Edge& e : edges) {
    if (e.a >= kProvisional) e.a = e.a - kProvisional + m;
    if (e.b >= kProvisional) e.b = e.b - kProvisional + m;
  }
  return Tree(std::move(labels), std::move(edges));
}

}  // namespace

Tree balanced_tree(int levels) {
  if (levels < 1) throw std::invalid_argument("balanced_tree needs levels >= 1");
  if (levels > 16) throw std::invalid_argument("balanced_tree: levels too large");
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  int next = kProvisional;
  // Unrooted: the two halves are joined directly by one 0.05 edge.
  const int left = grow_balanced(levels - 1, labels, edges, next);
  const int right = grow_balanced(levels - 1, labels, edges, next);
  edges.push_back({left, right, kDefaultLength});
  return assemble(std::move(labels), std::move(edges));
}

Tree c_tree(int levels, double long_branch) {
  if (levels < 1) throw std::invalid_argument("c_tree needs levels >= 1");
  if (levels > 16) throw std::invalid_argument("c_tree: levels too large");
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  int next = kProvisional;
  const int root = grow_balanced(levels, labels, edges, next);
  const int cherry = grow_balanced(1, labels, edges, next);
  edges.push_back({root, cherry, long_branch});
  return assemble(std::move(labels), std::move(edges));
}

std::uint64_t count_topologies(int species) {
  if (species < 3) throw std::invalid_argument("count_topologies needs m >= 3");
  std::uint64_t result = 1;
  for (std::uint64_t k = 3; k <= 2 * static_cast<std::uint64_t>(species) - 5; k += 2) {
    if (result > UINT64_MAX / k) throw std::overflow_error("(2m-5)!! exceeds 64 bits");
    result *= k;
  }
  return result;
}

void require_same_leaves(const Tree& a, std::span<const std::string> labels) {
  if (a.leaf_count() != labels.size()) {
    throw std::invalid_argument("leaf sets differ: tree has " + std::to_string(a.leaf_count()) +
                                " leaves, other has " + std::to_string(labels.size()));
  }
  for (const auto& l : labels) {
    if (a.find_leaf(l) < 0) throw std::invalid_argument("leaf '" + l + "' missing from tree");
  }
}

}  // namespace cladecheck
