#include "cladecheck/simulate.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "cladecheck/jc69.hpp"
#include "tree_walk.hpp"

namespace cladecheck {

namespace {

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Alignment simulate_alignment(const SimConfig& config) {
  if (config.sites < 1) throw std::invalid_argument("simulation needs at least one site");
  const Tree& tree = config.tree;
  const std::size_t n = config.sites;
  std::mt19937_64 rng(config.seed);

  const int root = tree.leaf_count() == 2 ? 0 : static_cast<int>(tree.leaf_count());
  std::vector<std::vector<std::uint8_t>> state(tree.node_count());
  for (const auto& visit : detail::preorder(tree, root)) {
    auto& child = state[visit.node];
    child.resize(n);
    if (visit.parent_edge < 0) {
      for (auto& s : child) s = static_cast<std::uint8_t>(std::min(3.0, unit_draw(rng) * 4.0));
      continue;
    }
    const auto& parent = state[tree.other_end(visit.parent_edge, visit.node)];
    const double length = tree.edge(visit.parent_edge).length;
    const double same = jc69::same_prob(length);
    const double change = jc69::change_prob(length);
    for (std::size_t s = 0; s < n; ++s) {
      const double u = unit_draw(rng);
      if (u < same) {
        child[s] = parent[s];
      } else {
        const int pick = std::min(2, static_cast<int>((u - same) / change));
        child[s] = static_cast<std::uint8_t>((parent[s] + 1 + pick) % kStates);
      }
    }
  }

  std::vector<std::string> labels(tree.labels().begin(), tree.labels().end());
  std::vector<std::vector<Nucleotide>> rows(tree.leaf_count());
  for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    rows[leaf].reserve(n);
    for (auto s : state[leaf]) rows[leaf].push_back(static_cast<Nucleotide>(s));
  }
  return Alignment(std::move(labels), std::move(rows));
}

}  // namespace cladecheck
