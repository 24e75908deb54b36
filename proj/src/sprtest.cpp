#include "cladecheck/sprtest.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "cladecheck/likelihood.hpp"
#include "cladecheck/logspace.hpp"

namespace cladecheck {

const char* to_string(Variant variant) {
  return variant == Variant::kPlain ? "plain" : "opt";
}

Variant parse_variant(std::string_view text) {
  if (text == "plain") return Variant::kPlain;
  if (text == "opt") return Variant::kOpt;
  throw std::invalid_argument("unknown variant '" + std::string(text) + "' (plain|opt)");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct PlainTerm {
  WeightedNeighbor neighbor;
  double log_likelihood;
};

std::vector<PlainTerm> score_plain_neighbors(const Tree& fitted, const PatternTable& patterns) {
  std::vector<PlainTerm> terms;
  for (auto& n : neighborhood_plain(fitted)) {
    const double ll = log_likelihood(n.tree, patterns);
    terms.push_back({std::move(n), ll});
  }
  return terms;
}

double finish(TestReport& report) {
  std::vector<double> logs;
  logs.reserve(report.neighbors.size());
  for (const auto& t : report.neighbors) logs.push_back(t.weight.log_value() + t.log_likelihood);
  report.denominator = log_sum_exp<double>(logs);
  report.statistic = std::exp(report.numerator - report.denominator);
  return report.statistic;
}

TestReport plain_report(const OptimizedTree& fitted, const std::vector<PlainTerm>& terms) {
  TestReport report{Variant::kPlain, fitted.tree, fitted.log_likelihood, 0.0, 0.0, {}, {}};
  report.neighbors.reserve(terms.size());
  for (const auto& t : terms) {
    // The self term is exactly the numerator.
    const double ll = t.neighbor.move ? t.log_likelihood : fitted.log_likelihood;
    report.neighbors.push_back(
        {topology_string(t.neighbor.tree), t.neighbor.weight, ll, t.neighbor.move});
  }
  finish(report);
  return report;
}

TestReport opt_report(const OptimizedTree& fitted, const std::vector<PlainTerm>& terms,
                      const PatternTable& patterns, const OptimizerConfig& config) {
  TestReport report{Variant::kOpt, fitted.tree, fitted.log_likelihood, 0.0, 0.0, {}, {}};
  report.neighbors.push_back(
      {topology_string(fitted.tree), Weight{1, 1}, fitted.log_likelihood, std::nullopt});

  // Group midpoint copies by topology, keeping first-occurrence order.
  std::unordered_map<CanonicalTopology, std::size_t, CanonicalHash> group_of;
  std::vector<std::size_t> best_copy;
  group_of.emplace(canonical(fitted.tree), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!terms[i].neighbor.move) continue;
    auto [it, inserted] = group_of.try_emplace(canonical(terms[i].neighbor.tree), best_copy.size());
    if (inserted) {
      best_copy.push_back(i);
    } else if (it->second != static_cast<std::size_t>(-1) &&
               terms[i].log_likelihood > terms[best_copy[it->second]].log_likelihood) {
      best_copy[it->second] = i;
    }
  }
  for (std::size_t index : best_copy) {
    const PlainTerm& start = terms[index];
    const OptimizedTree fit = optimize_all(start.neighbor.tree, patterns, config);
    report.neighbors.push_back(
        {topology_string(fit.tree), Weight{1, 1}, fit.log_likelihood, start.neighbor.move});
  }
  finish(report);
  return report;
}

}  // namespace

ReportPair spr_both_fitted(const OptimizedTree& fitted, const PatternTable& patterns,
                           const OptimizerConfig& config) {
  const auto start = Clock::now();
  const auto terms = score_plain_neighbors(fitted.tree, patterns);
  TestReport plain = plain_report(fitted, terms);
  plain.timing.neighborhood_seconds = seconds_since(start);
  plain.timing.total_seconds = plain.timing.neighborhood_seconds;

  const auto opt_start = Clock::now();
  TestReport opt = opt_report(fitted, terms, patterns, config);
  opt.timing.neighborhood_seconds = seconds_since(opt_start) + plain.timing.neighborhood_seconds;
  opt.timing.total_seconds = opt.timing.neighborhood_seconds;
  return {std::move(plain), std::move(opt)};
}

ReportPair spr_both(const Tree& tree, const PatternTable& patterns, const OptimizerConfig& config) {
  require_same_leaves(tree, patterns.labels);
  if (tree.leaf_count() < 4) throw std::invalid_argument("SPR tests need at least 4 leaves");
  const auto start = Clock::now();
  const OptimizedTree fitted = optimize_all(tree, patterns, config);
  const double fit_seconds = seconds_since(start);
  ReportPair out = spr_both_fitted(fitted, patterns, config);
  for (TestReport* r : {&out.plain, &out.opt}) {
    r->timing.optimize_seconds = fit_seconds;
    r->timing.total_seconds += fit_seconds;
  }
  return out;
}

TestReport score_topology(const Tree& tree, const PatternTable& patterns, Variant variant,
                          const OptimizerConfig& config) {
  require_same_leaves(tree, patterns.labels);
  if (tree.leaf_count() < 4) throw std::invalid_argument("SPR tests need at least 4 leaves");
  const auto start = Clock::now();
  const OptimizedTree fitted = optimize_all(tree, patterns, config);
  const double fit_seconds = seconds_since(start);

  const auto scored = Clock::now();
  const auto terms = score_plain_neighbors(fitted.tree, patterns);
  TestReport report = variant == Variant::kPlain ? plain_report(fitted, terms)
                                                 : opt_report(fitted, terms, patterns, config);
  report.timing.optimize_seconds = fit_seconds;
  report.timing.neighborhood_seconds = seconds_since(scored);
  report.timing.total_seconds = fit_seconds + report.timing.neighborhood_seconds;
  return report;
}

TestReport spr_plain(const Tree& tree, const PatternTable& patterns,
                     const OptimizerConfig& config) {
  return score_topology(tree, patterns, Variant::kPlain, config);
}

TestReport spr_plain(const Tree& tree, const Alignment& alignment,
                     const OptimizerConfig& config) {
  return spr_plain(tree, compress(alignment), config);
}

TestReport spr_opt(const Tree& tree, const PatternTable& patterns, const OptimizerConfig& config) {
  return score_topology(tree, patterns, Variant::kOpt, config);
}

TestReport spr_opt(const Tree& tree, const Alignment& alignment, const OptimizerConfig& config) {
  return spr_opt(tree, compress(alignment), config);
}

}  // namespace cladecheck
