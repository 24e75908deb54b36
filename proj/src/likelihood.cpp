#include "cladecheck/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include "pruning.hpp"

namespace cladecheck {

namespace {

int default_root(const Tree& tree) {
  return tree.leaf_count() == 2 ? 0 : static_cast<int>(tree.leaf_count());
}

detail::Partial combined_at(const detail::PruningContext& ctx, int node) {
  const Tree& tree = ctx.tree();
  if (node < 0 || static_cast<std::size_t>(node) >= tree.node_count()) {
    throw std::out_of_range("root node out of range");
  }
  const auto lengths = tree.lengths();
  std::vector<detail::Partial> down;
  ctx.compute_down(node, lengths, down);
  return ctx.subtree(node, -1, lengths, down);
}

}  // namespace

double log_likelihood(const Tree& tree, const PatternTable& patterns) {
  return log_likelihood_rooted_at(tree, patterns, default_root(tree));
}

double log_likelihood_rooted_at(const Tree& tree, const PatternTable& patterns, int node) {
  const detail::PruningContext ctx(tree, patterns);
  return ctx.root_log_likelihood(combined_at(ctx, node));
}

Eigen::VectorXd pattern_log_likelihoods(const Tree& tree, const PatternTable& patterns) {
  const detail::PruningContext ctx(tree, patterns);
  return ctx.root_site_log_likelihoods(combined_at(ctx, default_root(tree))).matrix();
}

double brute_force_log_likelihood(const Tree& tree, const PatternTable& patterns) {
  require_same_leaves(tree, patterns.labels);
  const std::size_t m = tree.leaf_count();
  if (m > 6) throw std::invalid_argument("brute-force likelihood is limited to six leaves");
  const std::size_t internal = tree.node_count() - m;
  std::vector<int> row(m);
  for (std::size_t i = 0; i < m; ++i) row[i] = patterns.find(tree.label(static_cast<int>(i)));

  std::size_t assignments = 1;
  for (std::size_t i = 0; i < internal; ++i) assignments *= kStates;

  std::vector<int> state(tree.node_count());
  double total = 0.0;
  for (Eigen::Index k = 0; k < patterns.counts.size(); ++k) {
    for (std::size_t i = 0; i < m; ++i) state[i] = patterns.states(row[i], k);
    double site = 0.0;
    for (std::size_t code = 0; code < assignments; ++code) {
      std::size_t rest = code;
      for (std::size_t i = 0; i < internal; ++i) {
        state[m + i] = static_cast<int>(rest % kStates);
        rest /= kStates;
      }
      double term = jc69::equilibrium();
      for (const Edge& e : tree.edges()) {
        term *= jc69::transition_prob(static_cast<Nucleotide>(state[e.a]),
                                      static_cast<Nucleotide>(state[e.b]), e.length);
      }
      site += term;
    }
    total += patterns.counts(k) * std::log(site);
  }
  return total;
}

}  // namespace cladecheck
