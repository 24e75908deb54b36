#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cladecheck/alignment.hpp"
#include "cladecheck/brlenopt.hpp"
#include "cladecheck/tree.hpp"

namespace cladecheck {

enum class SearchMethod { kExhaustive, kHillClimb };

const char* to_string(SearchMethod method);

struct SearchResult {
  Tree tree;  // fitted lengths
  double log_likelihood;
  std::size_t topologies_evaluated;
  SearchMethod method;
  int steps = 0;  // accepted hill-climbing moves
};

/// Every unrooted binary topology on the labels, by inserting leaves in the
/// given order onto every edge. All lengths 0.05. Needs 4 <= m <= 7.
std::vector<Tree> all_topologies(std::span<const std::string> labels);

/// Fits every topology and returns the best; exact ties go to the smaller
/// topology_string(). Needs 4 <= m <= 7.
SearchResult exhaustive_ml(const PatternTable& patterns, const OptimizerConfig& config = {});

/// Moves to the best fitted SPR neighbour while that strictly improves the
/// log-likelihood by more than config.round_tolerance.
SearchResult hill_climb_ml(const PatternTable& patterns, const Tree& start,
                           const OptimizerConfig& config = {});

/// hill_climb_ml from default_start(patterns).
SearchResult hill_climb_ml(const PatternTable& patterns, const OptimizerConfig& config = {});

/// First topology of all_topologies() for m <= 7, otherwise
/// stepwise_addition().
Tree default_start(const PatternTable& patterns, const OptimizerConfig& config = {});

/// Greedy stepwise addition: leaves in alignment order, each inserted on the
/// edge that gives the highest fitted likelihood so far.
Tree stepwise_addition(const PatternTable& patterns, const OptimizerConfig& config = {});

/// exhaustive_ml for m <= 7, hill_climb_ml otherwise.
SearchResult find_ml_tree(const PatternTable& patterns, const OptimizerConfig& config = {});

/// Inserts a new leaf at the midpoint of `edge` with the given pendant
/// length.
Tree insert_leaf(const Tree& tree, int edge, const std::string& label, double pendant_length);

}  // namespace cladecheck
