// cladecheck command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "cladecheck/alignment.hpp"
#include "cladecheck/brlenopt.hpp"
#include "cladecheck/harness.hpp"
#include "cladecheck/parallel.hpp"
#include "cladecheck/search.hpp"
#include "cladecheck/simulate.hpp"
#include "cladecheck/spr.hpp"
#include "cladecheck/sprtest.hpp"
#include "cladecheck/tree.hpp"

namespace {

using namespace cladecheck;
using nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

Tree read_tree(const std::string& path) { return parse_newick(slurp(path)); }

void add_optimizer_flags(CLI::App* app, OptimizerConfig& cfg) {
  app->add_option("--brlen-min", cfg.min_length, "Smallest branch length");
  app->add_option("--brlen-max", cfg.max_length, "Largest branch length");
  app->add_option("--brlen-tol", cfg.branch_tolerance, "Per-branch length tolerance");
  app->add_option("--max-rounds", cfg.max_rounds, "Coordinate ascent round limit");
}

ordered_json move_json(const SprMove& m) {
  return {{"cut_edge", m.cut_edge},
          {"pruned_node", m.pruned_node},
          {"target_edge", m.target_edge},
          {"type", to_string(m.type)}};
}

ordered_json report_json(const TestReport& r) {
  ordered_json neighbors = ordered_json::array();
  for (const auto& n : r.neighbors) {
    neighbors.push_back({{"topology", n.topology},
                         {"weight", std::to_string(n.weight.numerator) + "/" +
                                        std::to_string(n.weight.denominator)},
                         {"log_likelihood", n.log_likelihood},
                         {"move", n.move ? move_json(*n.move) : ordered_json(nullptr)}});
  }
  return {{"variant", to_string(r.variant)},
          {"tree", write_newick(r.tree)},
          {"topology", topology_string(r.tree)},
          {"log_numerator", r.numerator},
          {"log_denominator", r.denominator},
          {"statistic", r.statistic},
          {"timing",
           {{"optimize_seconds", r.timing.optimize_seconds},
            {"neighborhood_seconds", r.timing.neighborhood_seconds},
            {"total_seconds", r.timing.total_seconds}}},
          {"neighbors", neighbors}};
}

std::vector<std::size_t> parse_lengths(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const long long v = std::stoll(item, &used);
    if (used != item.size() || v < 1) throw std::invalid_argument("bad length '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPR-based tests of phylogenetic tree topologies under Jukes-Cantor"};
  app.require_subcommand(1);

  // test
  auto* test = app.add_subcommand("test", "SPR_plain or SPR_opt statistic for a tree");
  std::string test_tree, test_align, test_variant = "plain", test_out;
  OptimizerConfig test_cfg;
  test->add_option("--tree", test_tree, "Newick tree file")->required();
  test->add_option("--align", test_align, "FASTA or PHYLIP alignment")->required();
  test->add_option("--variant", test_variant, "plain or opt")
      ->check(CLI::IsMember({"plain", "opt"}));
  test->add_option("--out", test_out, "JSON report path");
  add_optimizer_flags(test, test_cfg);

  // neighborhood
  auto* nbh = app.add_subcommand("neighborhood", "List SPR neighbours of a tree");
  std::string nbh_tree;
  bool nbh_unique = false, nbh_weighted = false;
  nbh->add_option("--tree", nbh_tree, "Newick tree file")->required();
  auto* unique_flag = nbh->add_flag("--unique", nbh_unique, "Distinct topologies, weight 1");
  nbh->add_flag("--weighted", nbh_weighted, "Every rearrangement with its weight (default)")
      ->excludes(unique_flag);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a JC alignment down a tree");
  std::string sim_tree, sim_out;
  std::size_t sim_sites = 0;
  std::uint64_t sim_seed = 1;
  sim->add_option("--tree", sim_tree, "Newick tree file")->required();
  sim->add_option("--sites", sim_sites, "Alignment length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Random seed");
  sim->add_option("--out", sim_out, "FASTA output path (default stdout)");

  // search
  auto* search = app.add_subcommand("search", "Maximum-likelihood topology search");
  std::string search_align, search_start;
  bool search_exhaustive = false, search_hill = false;
  OptimizerConfig search_cfg;
  search->add_option("--align", search_align, "FASTA or PHYLIP alignment")->required();
  auto* exh = search->add_flag("--exhaustive", search_exhaustive, "Score every topology (m <= 7)");
  search->add_flag("--hill-climb", search_hill, "SPR hill climbing")->excludes(exh);
  search->add_option("--start", search_start, "Starting tree for hill climbing");
  add_optimizer_flags(search, search_cfg);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a simulation study, writing CSV");
  std::string exp_scenario, exp_lengths, exp_variant = "both", exp_out, exp_summary, exp_levels;
  std::size_t exp_replicates = 0;
  std::uint64_t exp_seed = 1;
  int exp_repeats = 1;
  bool exp_no_search = false;
  OptimizerConfig exp_cfg;
  exp->add_option("scenario", exp_scenario,
                  "four-species, c2, c2-long, c4, scaling or neighborhoods")
      ->required()
      ->check(CLI::IsMember({"four-species", "c2", "c2-long", "c4", "scaling", "neighborhoods"}));
  exp->add_option("--lengths", exp_lengths, "Comma-separated sequence lengths");
  exp->add_option("--replicates", exp_replicates, "Replicates per length")
      ->check(CLI::PositiveNumber);
  exp->add_option("--seed", exp_seed, "Master seed");
  exp->add_option("--variant", exp_variant, "plain, opt or both")
      ->check(CLI::IsMember({"plain", "opt", "both"}));
  exp->add_option("--out", exp_out, "CSV output path")->required();
  exp->add_option("--summary", exp_summary, "Per-length summary CSV (accuracy scenarios)");
  exp->add_option("--levels", exp_levels, "Scaling: comma-separated C_i levels");
  exp->add_option("--timing-repeats", exp_repeats, "Scaling: keep the fastest of k runs")
      ->check(CLI::PositiveNumber);
  exp->add_flag("--no-search", exp_no_search, "Scaling: test the generating topology");
  add_optimizer_flags(exp, exp_cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test) {
      test_cfg.validate();
      const Tree tree = read_tree(test_tree);
      const PatternTable patterns = compress(read_alignment_file(test_align));
      const TestReport report =
          score_topology(tree, patterns, parse_variant(test_variant), test_cfg);
      if (!test_out.empty()) write_text(test_out, report_json(report).dump(2) + "\n");
      std::printf("%.9g\n", report.statistic);
    } else if (*nbh) {
      const Tree tree = read_tree(nbh_tree);
      std::string out;
      if (nbh_unique) {
        const auto trees = neighborhood_unique(tree);
        for (std::size_t i = 1; i < trees.size(); ++i) out += write_newick(trees[i]) + "\t1\n";
      } else {
        for (const auto& n : neighborhood_plain(tree)) {
          if (!n.move) continue;
          out += write_newick(n.tree) + "\t" + std::to_string(n.weight.numerator) + "/" +
                 std::to_string(n.weight.denominator) + "\n";
        }
      }
      std::cout << out;
    } else if (*sim) {
      const Alignment a = simulate_alignment({read_tree(sim_tree), sim_sites, sim_seed});
      write_text(sim_out, write_fasta(a));
    } else if (*search) {
      search_cfg.validate();
      const PatternTable patterns = compress(read_alignment_file(search_align));
      SearchResult result = [&] {
        if (search_exhaustive) return exhaustive_ml(patterns, search_cfg);
        if (!search_start.empty()) return hill_climb_ml(patterns, read_tree(search_start), search_cfg);
        if (search_hill) return hill_climb_ml(patterns, search_cfg);
        return find_ml_tree(patterns, search_cfg);
      }();
      std::cout << write_newick(result.tree) << "\n";
      std::fprintf(stderr, "log_likelihood %.12g, %zu topologies, %s, %d steps\n",
                   result.log_likelihood, result.topologies_evaluated, to_string(result.method),
                   result.steps);
    } else if (*exp) {
      const Scenario scenario = parse_scenario(exp_scenario);
      ExperimentSpec spec = default_spec(scenario);
      if (!exp_lengths.empty()) spec.lengths = parse_lengths(exp_lengths);
      if (exp_replicates) spec.replicates = exp_replicates;
      if (!exp_levels.empty()) {
        spec.levels.clear();
        for (auto l : parse_lengths(exp_levels)) spec.levels.push_back(static_cast<int>(l));
      }
      spec.seed = exp_seed;
      spec.plain = exp_variant != "opt";
      spec.opt = exp_variant != "plain";
      spec.timing_repeats = exp_repeats;
      spec.search = !exp_no_search;
      spec.threads = threads_from_env();
      spec.optimizer = exp_cfg;
      if (scenario == Scenario::kScaling || scenario == Scenario::kNeighborhoods) {
        if (!exp_summary.empty()) throw std::invalid_argument("--summary needs an accuracy scenario");
        run_experiment(spec).write(exp_out);
      } else {
        const ScenarioResult result = run_scenario(spec);
        result.replicate_table().write(exp_out);
        if (!exp_summary.empty()) result.summary_table().write(exp_summary);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cladecheck: %s\n", e.what());
    return 1;
  }
  return 0;
}
