#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cladecheck/brlenopt.hpp"
#include "cladecheck/tree.hpp"

namespace cladecheck {

/// Header plus rows; fields are RFC 4180 quoted on output.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
  void write(const std::string& path) const;
};

/// Floating-point CSV field: 9 significant digits, empty for NaN.
std::string csv_number(double value);

enum class Scenario { kFourSpecies, kC2, kC2Long, kC4, kScaling, kNeighborhoods };

const char* to_string(Scenario scenario);
Scenario parse_scenario(std::string_view text);

/// Generating tree of an accuracy scenario. Throws for kScaling and
/// kNeighborhoods, which are not single-tree accuracy runs.
Tree scenario_tree(Scenario scenario);

struct ExperimentSpec {
  Scenario scenario = Scenario::kFourSpecies;
  std::vector<std::size_t> lengths;  // sites per simulated alignment
  std::size_t replicates = 1;
  std::uint64_t seed = 1;
  bool plain = true;
  bool opt = true;
  std::vector<int> levels;         // scaling: C_i trees to time
  bool search = true;              // scaling: false tests the generating topology
  int timing_repeats = 1;          // scaling: report the fastest of k runs
  std::size_t threads = 1;
  OptimizerConfig optimizer;

  void validate() const;
};

/// Desk-scale defaults: lengths 1, 2, 4, .., 8192; 1000 replicates for the
/// four-species tree, 200 for C_2 runs, 20 for C_4; C_3..C_6 once each at
/// 512 and 1024 sites for the scaling run; 512 sites and 200 replicates for
/// the neighbourhood run.
ExperimentSpec default_spec(Scenario scenario);

struct ReplicateRow {
  std::size_t sites;
  std::size_t replicate;
  std::uint64_t seed;
  bool recovered;  // ML topology equals the generating topology
  double ml_log_likelihood;
  std::optional<double> plain;  // statistic of the ML topology
  std::optional<double> opt;
};

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for fewer than 2 values
};

Moments moments(const std::vector<double>& values);

struct SummaryRow {
  std::size_t sites;
  Moments recovery;
  Moments plain_correct;
  Moments plain_incorrect;
  Moments opt_correct;
  Moments opt_incorrect;
};

struct ScenarioResult {
  std::vector<ReplicateRow> replicates;
  std::vector<SummaryRow> summary;

  CsvTable replicate_table() const;
  CsvTable summary_table() const;
};

/// Accuracy study for one generating tree: per (length, replicate) simulate,
/// find the ML tree (exhaustive for m <= 7, hill climbing otherwise), then
/// score the ML topology. Replicate seeds are
/// replicate_seed(replicate_seed(seed, sites), replicate).
ScenarioResult run_scenario(const ExperimentSpec& spec);

struct NeighborhoodRow {
  std::size_t index;
  std::string topology;
  int nni_stratum;  // NNI distance from C_2
  Moments log_likelihood;
  Moments plain;
  Moments opt;
};

struct NeighborhoodResult {
  std::vector<NeighborhoodRow> rows;
  double plain_sum = 0.0;  // sum over topologies of the mean statistic
  double opt_sum = 0.0;

  CsvTable table() const;
};

/// Scores every 6-leaf topology on data simulated from C_2: fitted
/// log-likelihood and both statistics, averaged over replicates. Replicate
/// seeds are replicate_seed(seed, replicate).
NeighborhoodResult run_neighborhoods(std::size_t sites, std::size_t replicates,
                                     std::uint64_t seed, std::size_t threads = 1,
                                     const OptimizerConfig& optimizer = {});

struct TimingRow {
  int level;
  std::size_t species;
  std::size_t sites;
  std::size_t patterns;
  std::size_t spr_moves;         // one-away plus distant moves
  std::size_t unique_neighbors;  // distinct neighbour topologies
  std::string search_method;
  double search_seconds;
  double plain_seconds;
  double opt_seconds;
  bool recovered;
  std::optional<double> plain;
  std::optional<double> opt;
};

/// Wall-clock cost of the ML search and of each test on C_i trees.
std::vector<TimingRow> timing_report(const ExperimentSpec& spec);
CsvTable timing_table(const std::vector<TimingRow>& rows);

/// Runs any scenario and returns its main table.
CsvTable run_experiment(const ExperimentSpec& spec);

}  // namespace cladecheck
