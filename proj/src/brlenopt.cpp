#include "cladecheck/brlenopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "brent.hpp"
#include "cladecheck/likelihood.hpp"
#include "pruning.hpp"

namespace cladecheck {

void OptimizerConfig::validate() const {
  if (!(min_length > 0.0) || !(max_length > min_length) || !std::isfinite(max_length)) {
    throw std::invalid_argument("optimizer bounds must satisfy 0 < min < max");
  }
  if (!(branch_tolerance > 0.0) || !(round_tolerance > 0.0)) {
    throw std::invalid_argument("optimizer tolerances must be positive");
  }
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
}

namespace {

// A new length must beat the current one by more than summation noise.
constexpr double kMinGain = 1e-9;
constexpr double kFirstStep = 1.25;
constexpr double kScaleCeiling = 1.0;
constexpr double kMaxStretch = 256.0;

struct LinePoint {
  double length;
  double value;
};

// Maximizes f on [lo, hi] near `current`; returns `current` unless the gain
// exceeds kMinGain.
template <class F>
LinePoint line_maximize(const F& objective, double current, double lo, double hi, double tol,
                        bool refine = true) {
  const LinePoint start{current, objective(current)};
  auto at = [&](double t) { return LinePoint{t, objective(t)}; };

  // Walk uphill from the current length in growing geometric steps until
  // the value drops, so the refinement lands on the peak nearest the start.
  double step = kFirstStep;
  LinePoint mid{std::clamp(current, lo, hi), 0.0};
  mid.value = mid.length == current ? start.value : objective(mid.length);
  LinePoint left = at(std::max(lo, mid.length / step));
  LinePoint right = at(std::min(hi, mid.length * step));
  if (left.value > mid.value && left.value >= right.value) {
    while (left.length > lo && left.value > mid.value) {
      right = mid;
      mid = left;
      step *= step;
      left = at(std::max(lo, left.length / step));
    }
  } else {
    while (right.length < hi && right.value > mid.value) {
      left = mid;
      mid = right;
      step *= step;
      right = at(std::min(hi, right.length * step));
    }
  }
  LinePoint best = mid;
  for (const LinePoint& p : {left, right}) {
    if (p.value > best.value) best = p;
  }

  if (refine) {
    const detail::BrentResult peak = detail::brent_maximize(objective, left.length, right.length, tol);
    if (peak.value > best.value) best = {peak.x, peak.value};
  }
  if (std::isnan(best.value) || !(best.value > start.value + kMinGain)) return start;
  return best;
}

LinePoint maximize_edge(const detail::EdgeObjective& objective, double current,
                        const OptimizerConfig& config) {
  return line_maximize(objective, current, config.min_length, config.max_length,
                       config.branch_tolerance);
}

// Best common multiple of all lengths. From a poor start (all equal and far
// too short, say) single-edge moves saturate the first edges they touch and
// then stall on a flat ridge; fixing the overall scale first avoids that.
void fit_scale(const Tree& tree, const PatternTable& patterns, std::vector<double>& lengths,
               const OptimizerConfig& config) {
  const auto [shortest, longest] = std::minmax_element(lengths.begin(), lengths.end());
  if (!(*shortest > 0.0)) return;
  std::vector<double> scaled(lengths.size());
  auto objective = [&](double factor) {
    for (std::size_t e = 0; e < lengths.size(); ++e) scaled[e] = lengths[e] * factor;
    return log_likelihood(tree.with_lengths(scaled), patterns);
  };
  const double lo = config.min_length / *shortest;
  // Past about one substitution per site the surface flattens out, which is
  // the trap this step is meant to avoid.
  const double hi = std::min(config.max_length, kScaleCeiling) / *longest;
  if (!(lo < 1.0 && 1.0 < hi)) return;
  // A coarse factor is enough for a starting point.
  const LinePoint best = line_maximize(objective, 1.0, lo, hi, 1.0, false);
  for (double& l : lengths) l *= best.length;
}

// Coordinate ascent crawls along ridges where two lengths trade off against
// each other. After each round, try continuing along that round's step.
double extrapolate(const Tree& tree, const PatternTable& patterns, std::vector<double>& lengths,
                   const std::vector<double>& before, double value, const OptimizerConfig& config) {
  std::vector<double> moved(lengths.size());
  auto at = [&](double factor) {
    for (std::size_t e = 0; e < lengths.size(); ++e) {
      moved[e] = std::clamp(before[e] + factor * (lengths[e] - before[e]), config.min_length,
                            config.max_length);
    }
  };
  auto objective = [&](double factor) {
    at(factor);
    return log_likelihood(tree.with_lengths(moved), patterns);
  };
  // Doubling is enough; the next sweep does the fine work.
  double best_factor = 1.0;
  for (double factor = 2.0; factor <= kMaxStretch; factor *= 2.0) {
    const double trial = objective(factor);
    if (!(trial > value + kMinGain)) break;
    best_factor = factor;
    value = trial;
  }
  if (best_factor > 1.0) {
    at(best_factor);
    lengths = moved;
  }
  return value;
}

class Sweeper {
 public:
  Sweeper(const detail::PruningContext& ctx, std::vector<double>& lengths,
          const OptimizerConfig& config)
      : ctx_(ctx), tree_(ctx.tree()), lengths_(lengths), config_(config) {}

  /// One pass over every edge; returns the log-likelihood after the pass.
  double sweep() {
    const int root = static_cast<int>(tree_.leaf_count());
    ctx_.compute_down(root, lengths_, down_);
    for (int e : tree_.incident(root)) {
      const int child = tree_.other_end(e, root);
      visit(child, e, ctx_.subtree(root, e, lengths_, down_));
    }
    return value_;
  }

 private:
  void visit(int v, int parent_edge, const detail::Partial& up) {
    const detail::EdgeObjective objective(up, down_[v], ctx_.counts());
    const LinePoint point = maximize_edge(objective, lengths_[parent_edge], config_);
    lengths_[parent_edge] = point.length;
    value_ = point.value;
    if (tree_.is_leaf(v)) return;

    for (int e : tree_.incident(v)) {
      if (e == parent_edge) continue;
      detail::Partial toward = ctx_.ones();
      detail::absorb(toward, up, lengths_[parent_edge]);
      for (int other : tree_.incident(v)) {
        if (other == parent_edge || other == e) continue;
        detail::absorb(toward, down_[tree_.other_end(other, v)], lengths_[other]);
      }
      visit(tree_.other_end(e, v), e, toward);
    }
    down_[v] = ctx_.subtree(v, parent_edge, lengths_, down_);
  }

  const detail::PruningContext& ctx_;
  const Tree& tree_;
  std::vector<double>& lengths_;
  const OptimizerConfig& config_;
  std::vector<detail::Partial> down_;
  double value_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

Tree optimize_branch(const Tree& tree, int edge, const PatternTable& patterns,
                     const OptimizerConfig& config) {
  config.validate();
  if (edge < 0 || static_cast<std::size_t>(edge) >= tree.edge_count()) {
    throw std::out_of_range("edge id out of range");
  }
  const detail::PruningContext ctx(tree, patterns);
  const auto lengths = tree.lengths();
  const int near = tree.edge(edge).a;
  const int far = tree.edge(edge).b;
  std::vector<detail::Partial> down;
  ctx.compute_down(near, lengths, down);
  const detail::EdgeObjective objective(ctx.subtree(near, edge, lengths, down), down[far],
                                        ctx.counts());
  const LinePoint point = maximize_edge(objective, lengths[edge], config);
  return tree.with_length(edge, point.length);
}

OptimizedTree optimize_all(const Tree& tree, const PatternTable& patterns,
                           const OptimizerConfig& config) {
  config.validate();
  const detail::PruningContext ctx(tree, patterns);
  std::vector<double> lengths = tree.lengths();
  const double start = log_likelihood(tree, patterns);

  // Zero-length edges can make a site impossible, and no single-edge move
  // can recover from that; lift them onto the search interval first.
  if (!std::isfinite(start)) {
    for (double& l : lengths) l = std::max(l, config.min_length);
  }

  int rounds = 0;
  if (tree.leaf_count() == 2) {
    const Tree lifted = tree.with_lengths(lengths);
    const Tree best = optimize_branch(lifted, 0, patterns, config);
    lengths = best.lengths();
    rounds = 1;
  } else {
    fit_scale(tree, patterns, lengths, config);
    Sweeper sweeper(ctx, lengths, config);
    double previous = log_likelihood(tree.with_lengths(lengths), patterns);
    while (rounds < config.max_rounds) {
      const std::vector<double> before = lengths;
      double value = sweeper.sweep();
      ++rounds;
      if (value - previous >= config.round_tolerance) {
        value = extrapolate(tree, patterns, lengths, before, value, config);
      }
      const bool converged = !(value - previous >= config.round_tolerance);
      previous = value;
      if (converged) break;
    }
  }

  Tree result = tree.with_lengths(lengths);
  double value = log_likelihood(result, patterns);
  if (value < start) {
    // Unreachable unless summation noise exceeds kMinGain; keep the input.
    result = tree;
    value = start;
  }
  std::vector<int> clamped;
  for (std::size_t e = 0; e < lengths.size(); ++e) {
    const double l = result.edge(static_cast<int>(e)).length;
    if (l <= config.min_length || l >= config.max_length) clamped.push_back(static_cast<int>(e));
  }
  return {std::move(result), value, rounds, std::move(clamped)};
}

}  // namespace cladecheck
