#include "cladecheck/search.hpp"

#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "cladecheck/spr.hpp"

namespace cladecheck {

const char* to_string(SearchMethod method) {
  return method == SearchMethod::kExhaustive ? "exhaustive" : "hill-climb";
}

namespace {

constexpr double kStartLength = 0.05;

void require_exhaustive_size(std::size_t m) {
  if (m < 4 || m > 7) throw std::invalid_argument("exhaustive enumeration needs 4 <= m <= 7");
}

Tree star(std::span<const std::string> labels) {
  return Tree({labels[0], labels[1], labels[2]},
              {{3, 0, kStartLength}, {3, 1, kStartLength}, {3, 2, kStartLength}});
}

// Table over the first `taxa` rows, recompressed.
PatternTable leading_rows(const PatternTable& patterns, std::size_t taxa) {
  PatternTable out;
  out.labels.assign(patterns.labels.begin(), patterns.labels.begin() + static_cast<long>(taxa));
  std::unordered_map<std::string, Eigen::Index> index;
  std::vector<Eigen::Index> first;
  std::vector<double> counts;
  std::string key(taxa, '\0');
  for (Eigen::Index k = 0; k < patterns.states.cols(); ++k) {
    for (std::size_t t = 0; t < taxa; ++t) {
      key[t] = static_cast<char>(patterns.states(static_cast<Eigen::Index>(t), k));
    }
    auto [it, inserted] = index.try_emplace(key, static_cast<Eigen::Index>(counts.size()));
    if (inserted) {
      first.push_back(k);
      counts.push_back(patterns.counts(k));
    } else {
      counts[static_cast<std::size_t>(it->second)] += patterns.counts(k);
    }
  }
  out.states.resize(static_cast<Eigen::Index>(taxa), static_cast<Eigen::Index>(first.size()));
  for (std::size_t j = 0; j < first.size(); ++j) {
    out.states.col(static_cast<Eigen::Index>(j)) =
        patterns.states.col(first[j]).head(static_cast<Eigen::Index>(taxa));
  }
  out.counts = Eigen::Map<const Eigen::VectorXd>(counts.data(), static_cast<Eigen::Index>(counts.size()));
  return out;
}

bool better(double ll, const std::string& topo, double best_ll, const std::string& best_topo) {
  if (ll > best_ll) return true;
  return ll == best_ll && topo < best_topo;
}

}  // namespace

Tree insert_leaf(const Tree& tree, int edge, const std::string& label, double pendant_length) {
  const int m = static_cast<int>(tree.leaf_count());
  std::vector<std::string> labels(tree.labels().begin(), tree.labels().end());
  labels.push_back(label);
  auto shift = [m](int v) { return v >= m ? v + 1 : v; };
  std::vector<Edge> edges;
  edges.reserve(tree.edge_count() + 2);
  const int fork = static_cast<int>(tree.node_count()) + 1;
  for (std::size_t e = 0; e < tree.edge_count(); ++e) {
    const Edge& old = tree.edge(static_cast<int>(e));
    if (static_cast<int>(e) == edge) {
      edges.push_back({shift(old.a), fork, old.length / 2.0});
      edges.push_back({fork, shift(old.b), old.length / 2.0});
    } else {
      edges.push_back({shift(old.a), shift(old.b), old.length});
    }
  }
  edges.push_back({fork, m, pendant_length});
  return Tree(std::move(labels), std::move(edges));
}

std::vector<Tree> all_topologies(std::span<const std::string> labels) {
  require_exhaustive_size(labels.size());
  std::vector<Tree> current{star(labels)};
  for (std::size_t k = 3; k < labels.size(); ++k) {
    std::vector<Tree> next;
    next.reserve(current.size() * (2 * k - 3));
    for (const Tree& t : current) {
      for (std::size_t e = 0; e < t.edge_count(); ++e) {
        next.push_back(insert_leaf(t, static_cast<int>(e), labels[k], kStartLength));
      }
    }
    current = std::move(next);
  }
  for (Tree& t : current) {
    t = t.with_lengths(std::vector<double>(t.edge_count(), kStartLength));
  }
  return current;
}

SearchResult exhaustive_ml(const PatternTable& patterns, const OptimizerConfig& config) {
  require_exhaustive_size(patterns.labels.size());
  const auto topologies = all_topologies(patterns.labels);
  std::optional<OptimizedTree> best;
  std::string best_topo;
  for (const Tree& t : topologies) {
    OptimizedTree fit = optimize_all(t, patterns, config);
    std::string topo = topology_string(fit.tree);
    if (!best || better(fit.log_likelihood, topo, best->log_likelihood, best_topo)) {
      best = std::move(fit);
      best_topo = std::move(topo);
    }
  }
  return {best->tree, best->log_likelihood, topologies.size(), SearchMethod::kExhaustive, 0};
}

SearchResult hill_climb_ml(const PatternTable& patterns, const Tree& start,
                           const OptimizerConfig& config) {
  require_same_leaves(start, patterns.labels);
  OptimizedTree incumbent = optimize_all(start, patterns, config);
  std::size_t evaluated = 1;
  int steps = 0;
  while (true) {
    const auto neighbors = neighborhood_unique(incumbent.tree);
    std::optional<OptimizedTree> best;
    for (std::size_t i = 1; i < neighbors.size(); ++i) {
      OptimizedTree fit = optimize_all(neighbors[i], patterns, config);
      ++evaluated;
      if (!best || fit.log_likelihood > best->log_likelihood) best = std::move(fit);
    }
    if (!best || !(best->log_likelihood > incumbent.log_likelihood + config.round_tolerance)) break;
    incumbent = std::move(*best);
    ++steps;
  }
  return {incumbent.tree, incumbent.log_likelihood, evaluated, SearchMethod::kHillClimb, steps};
}

SearchResult hill_climb_ml(const PatternTable& patterns, const OptimizerConfig& config) {
  return hill_climb_ml(patterns, default_start(patterns, config), config);
}

Tree stepwise_addition(const PatternTable& patterns, const OptimizerConfig& config) {
  const std::size_t m = patterns.labels.size();
  if (m < 3) throw std::invalid_argument("stepwise addition needs at least 3 taxa");
  Tree current = star(patterns.labels);
  for (std::size_t k = 3; k < m; ++k) {
    const PatternTable sub = leading_rows(patterns, k + 1);
    std::optional<OptimizedTree> best;
    std::string best_topo;
    for (std::size_t e = 0; e < current.edge_count(); ++e) {
      const Tree candidate =
          insert_leaf(current, static_cast<int>(e), patterns.labels[k], kStartLength);
      OptimizedTree fit = optimize_all(candidate, sub, config);
      std::string topo = topology_string(fit.tree);
      if (!best || better(fit.log_likelihood, topo, best->log_likelihood, best_topo)) {
        best = std::move(fit);
        best_topo = std::move(topo);
      }
    }
    current = best->tree;
  }
  return current;
}

Tree default_start(const PatternTable& patterns, const OptimizerConfig& config) {
  if (patterns.labels.size() >= 4 && patterns.labels.size() <= 7) {
    return all_topologies(patterns.labels).front();
  }
  return stepwise_addition(patterns, config);
}

SearchResult find_ml_tree(const PatternTable& patterns, const OptimizerConfig& config) {
  if (patterns.labels.size() <= 7) return exhaustive_ml(patterns, config);
  return hill_climb_ml(patterns, config);
}

}  // namespace cladecheck
