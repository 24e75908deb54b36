#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cladecheck/alignment.hpp"
#include "cladecheck/brlenopt.hpp"
#include "cladecheck/spr.hpp"
#include "cladecheck/tree.hpp"

namespace cladecheck {

enum class Variant { kPlain, kOpt };

const char* to_string(Variant variant);
Variant parse_variant(std::string_view text);

/// One denominator term.
struct NeighborTerm {
  std::string topology;  // topology_string() of the neighbour
  Weight weight;
  double log_likelihood;
  std::optional<SprMove> move;  // empty for the tested tree itself
};

struct PhaseTiming {
  double optimize_seconds = 0.0;     // fitting the tested tree
  double neighborhood_seconds = 0.0; // building and scoring the neighbours
  double total_seconds = 0.0;
};

/// Result of one SPR test. statistic = exp(numerator - denominator), where
/// the denominator is log sum_t weight_t P(D | t, lengths_t) and includes
/// the tested tree itself with weight 1, so 0 < statistic <= 1.
struct TestReport {
  Variant variant;
  Tree tree;  // tested topology with its fitted lengths
  double numerator;
  double denominator;
  double statistic;
  std::vector<NeighborTerm> neighbors;
  PhaseTiming timing;
};

/// Fits the tree's lengths, then compares it with every SPR rearrangement
/// evaluated at the fitted lengths (midpoint regraft, no refitting). Each
/// one-away topology occurs four times with weight 1/4.
TestReport spr_plain(const Tree& tree, const PatternTable& patterns,
                     const OptimizerConfig& config = {});
TestReport spr_plain(const Tree& tree, const Alignment& alignment,
                     const OptimizerConfig& config = {});

/// Fits the tree's lengths, then compares it with every distinct SPR
/// neighbour topology at its own maximum-likelihood lengths. Each
/// neighbour's fit starts from the best-scoring midpoint copy of that
/// topology, so every term is at least its plain counterpart.
TestReport spr_opt(const Tree& tree, const PatternTable& patterns,
                   const OptimizerConfig& config = {});
TestReport spr_opt(const Tree& tree, const Alignment& alignment,
                   const OptimizerConfig& config = {});

/// Either statistic for an arbitrary topology (not necessarily the ML one):
/// its own lengths are fitted first, exactly as in spr_plain / spr_opt.
TestReport score_topology(const Tree& tree, const PatternTable& patterns, Variant variant,
                          const OptimizerConfig& config = {});

struct ReportPair {
  TestReport plain;
  TestReport opt;
};

/// Both statistics, sharing the fit of the tested tree.
ReportPair spr_both(const Tree& tree, const PatternTable& patterns,
                    const OptimizerConfig& config = {});

/// Both statistics for an already fitted tree (lengths are used as-is).
ReportPair spr_both_fitted(const OptimizedTree& fitted, const PatternTable& patterns,
                           const OptimizerConfig& config = {});

}  // namespace cladecheck
