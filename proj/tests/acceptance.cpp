// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Worker count comes from CLADECHECK_THREADS.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cladecheck/brlenopt.hpp"
#include "cladecheck/harness.hpp"
#include "cladecheck/jc69.hpp"
#include "cladecheck/likelihood.hpp"
#include "cladecheck/parallel.hpp"
#include "cladecheck/simulate.hpp"
#include "cladecheck/spr.hpp"
#include "cladecheck/sprtest.hpp"
#include "helpers.hpp"

using namespace cladecheck;

namespace {

int failures = 0;
std::map<std::string, bool> outcomes;  // name sorts in criterion order

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
  outcomes[name] = pass;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Running tally for the ordering check, fed by every run below.
struct Ordering {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = -INFINITY;  // largest opt - plain seen

  void add(double plain, double opt) {
    ++checked;
    const bool in_range = plain > 0.0 && plain <= 1.0 && opt > 0.0 && opt <= 1.0;
    worst = std::max(worst, opt - plain);
    violations += !in_range || opt > plain + 1e-9;
  }
};

Ordering ordering;

void combinatorics() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::size_t> species = {4, 5, 6, 7, 8, 9, 10, 18, 34, 66};
  const std::vector<std::size_t> moves = {8, 24, 48, 80, 120, 168, 224, 960, 3968, 16128};
  const std::vector<std::size_t> fresh = {2, 12, 30, 56, 90, 132, 182, 870, 3782, 15750};
  const std::vector<std::uint64_t> topologies = {3, 15, 105, 945, 10395, 135135, 2027025};
  std::mt19937_64 rng(1);
  std::string bad;
  for (std::size_t i = 0; i < species.size(); ++i) {
    const std::size_t m = species[i];
    // the larger sizes are the C_i trees
    const Tree t = m == 18 ? c_tree(4) : m == 34 ? c_tree(5) : m == 66 ? c_tree(6)
                                                                       : testing::random_tree(m, rng);
    std::size_t count = 0;
    for (const auto& mv : enumerate_moves(t)) count += mv.type != SprType::kAdjacent;
    const std::size_t unique = neighborhood_unique(t).size() - 1;
    if (count != moves[i] || unique != fresh[i]) {
      bad += fmt(" m=%zu got %zu/%zu", m, count, unique);
    }
  }
  for (int m = 4; m <= 10; ++m) {
    if (count_topologies(m) != topologies[m - 4]) bad += fmt(" count_topologies(%d)", m);
  }
  const double elapsed = seconds_since(start);
  report("criterion 1 (combinatorial oracles)", bad.empty() && elapsed < 1.0,
         bad.empty() ? fmt("all 10 sizes and 7 topology counts exact, %.2fs", elapsed)
                     : "mismatch:" + bad);
}

void likelihood_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> sites(1, 8);
  double brute = 0.0;
  double root = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = 4 + rep % 3;
    const Tree t = testing::random_tree(m, rng, 0.0, 2.0);
    const PatternTable p = compress(testing::random_alignment(
        testing::letters(m), static_cast<std::size_t>(sites(rng)), rng));
    const double ll = log_likelihood(t, p);
    brute = std::max(brute, std::abs(ll - brute_force_log_likelihood(t, p)));
    for (std::size_t v = 0; v < t.node_count(); ++v) {
      root = std::max(root, std::abs(log_likelihood_rooted_at(t, p, static_cast<int>(v)) - ll));
    }
  }
  const Tree t = testing::random_tree(4, rng);
  std::vector<std::vector<Nucleotide>> rows(4);
  for (int code = 0; code < 256; ++code) {
    for (int leaf = 0; leaf < 4; ++leaf) {
      rows[leaf].push_back(static_cast<Nucleotide>((code >> (2 * leaf)) & 3));
    }
  }
  const PatternTable all = compress(Alignment(testing::letters(4), rows));
  const double mass = pattern_log_likelihoods(t, all).array().exp().sum();
  const double elapsed = seconds_since(start);
  report("criterion 2 (likelihood oracle)",
         brute <= 1e-10 && root <= 1e-10 && std::abs(mass - 1.0) <= 1e-10 && elapsed < 10.0,
         fmt("max |prune-brute| %.2e, max root shift %.2e, column mass %.12f, %.2fs", brute, root,
             mass, elapsed));
}

void two_leaf() {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = 100000;
  std::vector<std::vector<Nucleotide>> rows(2);
  for (std::size_t k = 0; k < n; ++k) {
    const auto base = static_cast<Nucleotide>(k % 4);
    rows[0].push_back(base);
    rows[1].push_back(k < n / 4 ? static_cast<Nucleotide>((k + 1) % 4) : base);
  }
  const PatternTable p = compress(Alignment({"A", "B"}, rows));
  const OptimizedTree fit = optimize_all(Tree({"A", "B"}, {{0, 1, 0.05}}), p);
  const double length = fit.tree.edge(0).length;
  const double elapsed = seconds_since(start);
  report("criterion 3 (two-leaf optimum)",
         std::abs(length - jc69::jc_distance(0.25)) <= 0.01 && elapsed < 10.0,
         fmt("fitted %.6f vs %.6f, %.2fs", length, jc69::jc_distance(0.25), elapsed));
}

void four_species(std::size_t threads) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentSpec spec = default_spec(Scenario::kFourSpecies);
  spec.lengths = {1, 64, 1024, 8192};
  spec.threads = threads;
  const ScenarioResult r = run_scenario(spec);
  for (const auto& row : r.replicates) ordering.add(*row.plain, *row.opt);
  std::map<std::size_t, SummaryRow> by;
  for (const auto& s : r.summary) by[s.sites] = s;
  const double r1 = by[1].recovery.mean;
  const double r1024 = by[1024].recovery.mean;
  const double r8192 = by[8192].recovery.mean;
  const double plain = by[8192].plain_correct.mean;
  const double opt = by[8192].opt_correct.mean;
  const bool pass = r1 >= 0.2 && r1 <= 0.6 && r1024 > 0.95 && r8192 > 0.95 && plain > 0.95 &&
                    opt > 0.95;
  report("criterion 4 (four-species trend)", pass,
         fmt("recovery n=1 %.3f, n=64 %.3f, n=1024 %.3f, n=8192 %.3f; correct-topology mean at "
             "8192 plain %.4f opt %.4f; %zu replicates, %.0fs",
             r1, by[64].recovery.mean, r1024, r8192, plain, opt, spec.replicates,
             seconds_since(start)));
}

void neighborhoods(std::size_t threads) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentSpec spec = default_spec(Scenario::kNeighborhoods);
  const NeighborhoodResult r =
      run_neighborhoods(spec.lengths.front(), spec.replicates, spec.seed, threads, spec.optimizer);
  const NeighborhoodRow* truth = nullptr;
  double best_other_plain = 0.0, best_other_opt = 0.0, far_max = 0.0;
  std::string best_plain_topology, best_opt_topology;
  for (const auto& row : r.rows) {
    ordering.add(row.plain.mean, row.opt.mean);
    if (row.nni_stratum == 0) {
      truth = &row;
      continue;
    }
    if (row.plain.mean > best_other_plain) {
      best_other_plain = row.plain.mean;
      best_plain_topology = row.topology;
    }
    if (row.opt.mean > best_other_opt) {
      best_other_opt = row.opt.mean;
      best_opt_topology = row.topology;
    }
    if (row.nni_stratum >= 2) far_max = std::max({far_max, row.plain.mean, row.opt.mean});
  }
  const bool top = truth && truth->plain.mean > best_other_plain && truth->opt.mean > best_other_opt;
  const bool sums = std::abs(r.plain_sum - 3.15) <= 0.6 && std::abs(r.opt_sum - 1.02) <= 0.15;
  const bool far = far_max < 0.02;
  report("criterion 6 (neighbourhoods)", top && sums && far,
         fmt("true plain %.4f (best other %.4f %s), true opt %.4f (best other %.4f %s); "
             "sums plain %.3f opt %.3f; stratum>=2 max %.4f; %zu replicates, %.0fs",
             truth ? truth->plain.mean : NAN, best_other_plain, best_plain_topology.c_str(),
             truth ? truth->opt.mean : NAN, best_other_opt, best_opt_topology.c_str(),
             r.plain_sum, r.opt_sum, far_max, spec.replicates, seconds_since(start)));
}

void statistic_ordering() {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t m = 4 + rep % 4;
    const Tree t = testing::random_tree(m, rng, 0.01, 1.5);
    const std::size_t n = std::size_t{1} << (rep % 10);
    const PatternTable p = compress(simulate_alignment({t, n, rng()}));
    const ReportPair pair = spr_both(t, p);
    ordering.add(pair.plain.statistic, pair.opt.statistic);
  }
  report("criterion 5 (statistic ordering)", ordering.violations == 0,
         fmt("%zu instances, %zu violations, max opt-plain %.3e", ordering.checked,
             ordering.violations, ordering.worst));
}

void scaling() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentSpec spec = default_spec(Scenario::kScaling);
  spec.levels = {4};
  spec.lengths = {512, 1024};
  spec.search = false;
  // plain is cheap, so take the fastest of several runs; opt once
  spec.opt = false;
  spec.timing_repeats = 5;
  const auto plain_rows = timing_report(spec);
  spec.opt = true;
  spec.plain = false;
  spec.timing_repeats = 1;
  const auto opt_rows = timing_report(spec);

  const double ratio = plain_rows[1].plain_seconds / plain_rows[0].plain_seconds;
  bool opt_slower = true;
  bool sizes = true;
  for (std::size_t i = 0; i < 2; ++i) {
    opt_slower = opt_slower && opt_rows[i].opt_seconds >= plain_rows[i].plain_seconds;
    sizes = sizes && plain_rows[i].spr_moves == 960 && plain_rows[i].unique_neighbors == 870;
  }
  report("criterion 7 (scaling shape)", ratio >= 1.5 && ratio <= 3.0 && opt_slower && sizes,
         fmt("plain %.3fs -> %.3fs (ratio %.2f); opt %.1fs, %.1fs; moves %zu unique %zu; %.0fs",
             plain_rows[0].plain_seconds, plain_rows[1].plain_seconds, ratio,
             opt_rows[0].opt_seconds, opt_rows[1].opt_seconds, plain_rows[0].spr_moves,
             plain_rows[0].unique_neighbors, seconds_since(start)));
}

void determinism(std::size_t threads) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t parallel = std::max<std::size_t>(threads, 3);
  std::string detail;
  bool pass = true;
  for (Scenario s : {Scenario::kFourSpecies, Scenario::kC2, Scenario::kC2Long}) {
    ExperimentSpec spec = default_spec(s);
    spec.lengths = {32, 512};
    spec.replicates = 6;
    spec.seed = 2024;
    spec.threads = 1;
    const std::string a = run_experiment(spec).to_string();
    const std::string b = run_experiment(spec).to_string();
    spec.threads = parallel;
    const std::string c = run_experiment(spec).to_string();
    pass = pass && a == b && a == c;
    detail += fmt("%s %s; ", to_string(s), a == b && a == c ? "identical" : "DIFFERS");
  }
  const std::string n1 = run_neighborhoods(64, 3, 7, 1).table().to_string();
  const std::string n2 = run_neighborhoods(64, 3, 7, parallel).table().to_string();
  pass = pass && n1 == n2;
  detail += fmt("neighborhoods %s; serial vs %zu threads, %.0fs", n1 == n2 ? "identical" : "DIFFERS",
                parallel, seconds_since(start));
  report("criterion 8 (determinism)", pass, detail);
}

void c2_long_trend(std::size_t threads) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentSpec spec = default_spec(Scenario::kC2Long);
  spec.lengths = {256, 1024, 4096};
  spec.opt = false;
  spec.threads = threads;
  const ScenarioResult r = run_scenario(spec);
  std::vector<double> rates;
  for (const auto& s : r.summary) rates.push_back(s.recovery.mean);
  const bool pass = std::is_sorted(rates.begin(), rates.end());
  report("c2-long trend", pass,
         fmt("recovery n=256 %.3f, n=1024 %.3f, n=4096 %.3f; %zu replicates, %.0fs", rates[0],
             rates[1], rates[2], spec.replicates, seconds_since(start)));
}

}  // namespace

int main() {
  const std::size_t threads = threads_from_env();
  std::printf("acceptance run with %zu worker thread(s)\n", threads);
  combinatorics();
  likelihood_oracle();
  two_leaf();
  four_species(threads);
  neighborhoods(threads);
  statistic_ordering();
  scaling();
  determinism(threads);
  c2_long_trend(threads);
  std::printf("\nsummary\n");
  for (const auto& [name, pass] : outcomes) std::printf("  %s %s\n", pass ? "PASS" : "FAIL", name.c_str());
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
