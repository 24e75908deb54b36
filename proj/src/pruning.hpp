#pragma once

// Shared machinery for likelihood evaluation and branch-length optimisation.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "cladecheck/alignment.hpp"
#include "cladecheck/jc69.hpp"
#include "cladecheck/likelihood.hpp"
#include "cladecheck/tree.hpp"
#include "tree_walk.hpp"

namespace cladecheck::detail {

/// Conditional likelihoods of one side of the tree, one column per pattern.
/// True value = values(:, k) * exp(log_scale(k)).
struct Partial {
  Eigen::Matrix<double, kStates, Eigen::Dynamic> values;
  Eigen::ArrayXd log_scale;
};

inline void rescale(Partial& p) {
  for (Eigen::Index k = 0; k < p.values.cols(); ++k) {
    const double top = p.values.col(k).maxCoeff();
    if (top < kScaleThreshold && top > 0.0) {
      p.values.col(k) /= top;
      p.log_scale(k) += std::log(top);
    }
  }
}

/// acc <- acc * (P(length) child), elementwise per pattern.
inline void absorb(Partial& acc, const Partial& child, double length) {
  const double same = jc69::same_prob(length);
  const double change = jc69::change_prob(length);
  // P x = change * sum(x) + (same - change) * x for the JC matrix.
  const Eigen::RowVectorXd sums = child.values.colwise().sum();
  acc.values.array() *=
      ((same - change) * child.values.array()).rowwise() + (change * sums.array());
  acc.log_scale += child.log_scale;
  rescale(acc);
}

/// Binds a tree's leaves to rows of a pattern table.
class PruningContext {
 public:
  PruningContext(const Tree& tree, const PatternTable& patterns)
      : tree_(tree), patterns_(patterns), row_(tree.leaf_count()) {
    require_same_leaves(tree, patterns.labels);
    for (std::size_t i = 0; i < tree.leaf_count(); ++i) {
      row_[i] = patterns.find(tree.label(static_cast<int>(i)));
    }
  }

  Eigen::Index patterns() const { return patterns_.counts.size(); }
  const Eigen::VectorXd& counts() const { return patterns_.counts; }
  const Tree& tree() const { return tree_; }

  Partial ones() const {
    return {Eigen::Matrix<double, kStates, Eigen::Dynamic>::Ones(kStates, patterns()),
            Eigen::ArrayXd::Zero(patterns())};
  }

  Partial leaf(int node) const {
    Partial p{Eigen::Matrix<double, kStates, Eigen::Dynamic>::Zero(kStates, patterns()),
              Eigen::ArrayXd::Zero(patterns())};
    const auto states = patterns_.states.row(row_[node]);
    for (Eigen::Index k = 0; k < patterns(); ++k) p.values(states(k), k) = 1.0;
    return p;
  }

  /// Fills `down[v]` for every node except `root`: the partial of the
  /// subtree hanging below v when the tree is rooted at `root`.
  void compute_down(int root, std::span<const double> lengths, std::vector<Partial>& down) const {
    down.resize(tree_.node_count());
    const auto walk = preorder(tree_, root);
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
      if (it->parent_edge < 0) continue;
      down[it->node] = subtree(it->node, it->parent_edge, lengths, down);
    }
  }

  /// Partial at v combining every neighbour except across `skip_edge`.
  Partial subtree(int v, int skip_edge, std::span<const double> lengths,
                  const std::vector<Partial>& down) const {
    Partial acc = tree_.is_leaf(v) ? leaf(v) : ones();
    for (int e : tree_.incident(v)) {
      if (e == skip_edge) continue;
      absorb(acc, down[tree_.other_end(e, v)], lengths[e]);
    }
    return acc;
  }

  /// sum_k count_k log(1/4 sum_i acc(i,k)) for a fully combined partial.
  double root_log_likelihood(const Partial& acc) const {
    const Eigen::ArrayXd site =
        (0.25 * acc.values.colwise().sum().transpose().array()).log() + acc.log_scale;
    return patterns_.counts.dot(site.matrix());
  }

  Eigen::ArrayXd root_site_log_likelihoods(const Partial& acc) const {
    return (0.25 * acc.values.colwise().sum().transpose().array()).log() + acc.log_scale;
  }

 private:
  const Tree& tree_;
  const PatternTable& patterns_;
  std::vector<int> row_;
};

/// log-likelihood of the whole tree as a function of one edge's length,
/// given the partials on both sides of that edge.
class EdgeObjective {
 public:
  EdgeObjective(const Partial& near, const Partial& far, const Eigen::VectorXd& counts)
      : counts_(counts.array()) {
    const Eigen::Array<double, 1, Eigen::Dynamic> far_sum = far.values.colwise().sum().array();
    // Both terms are sums of non-negative products; no cancellation.
    matched_ = (near.values.array() * far.values.array()).colwise().sum().transpose();
    mismatched_ = (near.values.array() * ((-far.values.array()).rowwise() + far_sum))
                      .colwise()
                      .sum()
                      .transpose();
    constant_ = (counts_ * (near.log_scale + far.log_scale)).sum();
  }

  double operator()(double length) const {
    const double same = jc69::same_prob(length);
    const double change = jc69::change_prob(length);
    double total = constant_;
    for (Eigen::Index k = 0; k < counts_.size(); ++k) {
      total += counts_(k) * std::log(0.25 * (same * matched_(k) + change * mismatched_(k)));
    }
    return total;
  }

 private:
  Eigen::ArrayXd counts_;
  Eigen::ArrayXd matched_;
  Eigen::ArrayXd mismatched_;
  double constant_ = 0.0;
};

}  // namespace cladecheck::detail
