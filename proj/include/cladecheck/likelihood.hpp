#pragma once

#include <Eigen/Core>

#include "cladecheck/alignment.hpp"
#include "cladecheck/tree.hpp"

namespace cladecheck {

/// Partial likelihood columns whose largest entry falls below this are
/// renormalised, with the factor carried in log space.
inline constexpr double kScaleThreshold = 1e-200;

/// Natural-log likelihood log P(D | tree, lengths) under JC69, by
/// Felsenstein pruning over the compressed patterns. The tree's leaf labels
/// must equal the table's. Evaluated at the first internal node (leaf 0 for
/// the two-leaf tree).
double log_likelihood(const Tree& tree, const PatternTable& patterns);

/// Same quantity evaluated with the pruning recursion rooted at `node`.
/// Under a reversible model the choice of node does not matter.
double log_likelihood_rooted_at(const Tree& tree, const PatternTable& patterns, int node);

/// Unweighted per-pattern log site likelihoods.
Eigen::VectorXd pattern_log_likelihoods(const Tree& tree, const PatternTable& patterns);

/// Reference implementation: explicit sum over every assignment of states to
/// internal nodes. Exponential in the internal node count; limited to six
/// leaves.
double brute_force_log_likelihood(const Tree& tree, const PatternTable& patterns);

}  // namespace cladecheck
