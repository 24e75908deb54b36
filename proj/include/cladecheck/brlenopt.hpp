#pragma once

#include <vector>

#include "cladecheck/alignment.hpp"
#include "cladecheck/tree.hpp"

namespace cladecheck {

struct OptimizerConfig {
  double min_length = 1e-8;
  double max_length = 50.0;
  double branch_tolerance = 1e-7;  // length units
  double round_tolerance = 1e-6;   // log-likelihood units
  int max_rounds = 32;

  /// Throws std::invalid_argument unless 0 < min < max and tolerances > 0.
  void validate() const;
};

struct OptimizedTree {
  Tree tree;
  double log_likelihood;
  int rounds;
  /// Edges that finished at min_length or max_length.
  std::vector<int> clamped_edges;
};

/// Replaces one edge length by its one-dimensional likelihood maximiser on
/// [min_length, max_length] (Brent's golden-section/parabolic search plus
/// the two bounds). The input length is kept unless the maximiser is
/// strictly better, so the likelihood never decreases.
Tree optimize_branch(const Tree& tree, int edge, const PatternTable& patterns,
                     const OptimizerConfig& config = {});

/// Coordinate ascent over all edges. Each round sweeps the edges in a fixed
/// depth-first order from the first internal node; rounds repeat until the
/// gain drops below round_tolerance or max_rounds is reached. The returned
/// log-likelihood is never below the starting one.
OptimizedTree optimize_all(const Tree& tree, const PatternTable& patterns,
                           const OptimizerConfig& config = {});

}  // namespace cladecheck
