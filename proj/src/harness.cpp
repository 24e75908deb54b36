#include "cladecheck/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "cladecheck/parallel.hpp"
#include "cladecheck/search.hpp"
#include "cladecheck/simulate.hpp"
#include "cladecheck/spr.hpp"
#include "cladecheck/sprtest.hpp"

namespace cladecheck {

namespace {

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? csv_number(*v) : std::string();
}

}  // namespace

std::string csv_number(double value) {
  if (std::isnan(value)) return {};
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string CsvTable::to_string() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << to_string();
}

const char* to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kFourSpecies: return "four-species";
    case Scenario::kC2: return "c2";
    case Scenario::kC2Long: return "c2-long";
    case Scenario::kC4: return "c4";
    case Scenario::kScaling: return "scaling";
    case Scenario::kNeighborhoods: return "neighborhoods";
  }
  return "?";
}

Scenario parse_scenario(std::string_view text) {
  for (Scenario s : {Scenario::kFourSpecies, Scenario::kC2, Scenario::kC2Long, Scenario::kC4,
                     Scenario::kScaling, Scenario::kNeighborhoods}) {
    if (text == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(text) + "'");
}

Tree scenario_tree(Scenario scenario) {
  switch (scenario) {
    case Scenario::kFourSpecies: return parse_newick("((A:1,B:1):2,(C:1,D:1));");
    case Scenario::kC2: return c_tree(2);
    case Scenario::kC2Long: return c_tree(2, 2.5);
    case Scenario::kC4: return c_tree(4);
    default:
      throw std::invalid_argument(std::string("scenario '") + to_string(scenario) +
                                  "' has no single generating tree");
  }
}

void ExperimentSpec::validate() const {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  for (auto n : lengths) {
    if (n < 1) throw std::invalid_argument("sequence lengths must be >= 1");
  }
  if (lengths.empty()) throw std::invalid_argument("at least one sequence length is needed");
  if (!plain && !opt) throw std::invalid_argument("no statistic selected");
  if (timing_repeats < 1) throw std::invalid_argument("timing_repeats must be >= 1");
  if (scenario == Scenario::kScaling) {
    if (levels.empty()) throw std::invalid_argument("scaling needs at least one tree level");
    for (int l : levels) {
      if (l < 1) throw std::invalid_argument("tree levels must be >= 1");
    }
  }
  optimizer.validate();
}

ExperimentSpec default_spec(Scenario scenario) {
  ExperimentSpec spec;
  spec.scenario = scenario;
  for (std::size_t n = 1; n <= 8192; n *= 2) spec.lengths.push_back(n);
  switch (scenario) {
    case Scenario::kFourSpecies: spec.replicates = 1000; break;
    case Scenario::kC2:
    case Scenario::kC2Long: spec.replicates = 200; break;
    case Scenario::kC4: spec.replicates = 20; break;
    case Scenario::kScaling:
      spec.replicates = 1;
      spec.levels = {3, 4, 5, 6};
      spec.lengths = {512, 1024};
      break;
    case Scenario::kNeighborhoods:
      spec.replicates = 200;
      spec.lengths = {512};
      break;
  }
  return spec;
}

Moments moments(const std::vector<double>& values) {
  Moments m;
  m.count = values.size();
  if (values.empty()) {
    m.mean = std::numeric_limits<double>::quiet_NaN();
    m.sd = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

namespace {

OptimizedTree as_fitted(const SearchResult& found) {
  return {found.tree, found.log_likelihood, 0, {}};
}

struct Scores {
  std::optional<double> plain;
  std::optional<double> opt;
};

Scores score_fitted(const OptimizedTree& fitted, const PatternTable& patterns, bool plain,
                    bool opt, const OptimizerConfig& config) {
  if (opt) {
    const ReportPair pair = spr_both_fitted(fitted, patterns, config);
    Scores s{std::nullopt, pair.opt.statistic};
    if (plain) s.plain = pair.plain.statistic;
    return s;
  }
  // Plain only: skip refitting neighbours.
  return {score_topology(fitted.tree, patterns, Variant::kPlain, config).statistic, std::nullopt};
}

void append_moments(std::vector<std::string>& row, const Moments& m) {
  row.push_back(std::to_string(m.count));
  row.push_back(csv_number(m.mean));
  row.push_back(csv_number(m.sd));
}

}  // namespace

ScenarioResult run_scenario(const ExperimentSpec& spec) {
  spec.validate();
  const Tree truth = scenario_tree(spec.scenario);
  const CanonicalTopology truth_topology = canonical(truth);

  struct Job {
    std::size_t sites;
    std::size_t replicate;
  };
  std::vector<Job> jobs;
  for (auto n : spec.lengths) {
    for (std::size_t r = 0; r < spec.replicates; ++r) jobs.push_back({n, r});
  }
  std::vector<ReplicateRow> rows(jobs.size());
  parallel_for(jobs.size(), spec.threads, [&](std::size_t i) {
    const Job job = jobs[i];
    const std::uint64_t seed = replicate_seed(replicate_seed(spec.seed, job.sites), job.replicate);
    const PatternTable patterns = compress(simulate_alignment({truth, job.sites, seed}));
    const SearchResult found = find_ml_tree(patterns, spec.optimizer);
    // The search result is already fitted; the tests start from it.
    const Scores scores =
        score_fitted(as_fitted(found), patterns, spec.plain, spec.opt, spec.optimizer);
    rows[i] = {job.sites,   job.replicate, seed,      canonical(found.tree) == truth_topology,
               found.log_likelihood,       scores.plain, scores.opt};
  });

  ScenarioResult result;
  result.replicates = std::move(rows);
  for (auto n : spec.lengths) {
    std::vector<double> recovered, pc, pi, oc, oi;
    for (const auto& r : result.replicates) {
      if (r.sites != n) continue;
      recovered.push_back(r.recovered ? 1.0 : 0.0);
      if (r.plain) (r.recovered ? pc : pi).push_back(*r.plain);
      if (r.opt) (r.recovered ? oc : oi).push_back(*r.opt);
    }
    result.summary.push_back(
        {n, moments(recovered), moments(pc), moments(pi), moments(oc), moments(oi)});
  }
  return result;
}

CsvTable ScenarioResult::replicate_table() const {
  CsvTable t;
  t.header = {"sites", "replicate", "seed", "recovered", "ml_log_likelihood", "plain", "opt"};
  for (const auto& r : replicates) {
    t.rows.push_back({std::to_string(r.sites), std::to_string(r.replicate), std::to_string(r.seed),
                      r.recovered ? "1" : "0", csv_number(r.ml_log_likelihood),
                      csv_optional(r.plain), csv_optional(r.opt)});
  }
  return t;
}

CsvTable ScenarioResult::summary_table() const {
  CsvTable t;
  t.header = {"sites"};
  for (const char* group : {"recovery", "plain_correct", "plain_incorrect", "opt_correct",
                            "opt_incorrect"}) {
    for (const char* stat : {"n", "mean", "sd"}) t.header.push_back(std::string(group) + "_" + stat);
  }
  for (const auto& s : summary) {
    std::vector<std::string> row{std::to_string(s.sites)};
    for (const Moments* m :
         {&s.recovery, &s.plain_correct, &s.plain_incorrect, &s.opt_correct, &s.opt_incorrect}) {
      append_moments(row, *m);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

NeighborhoodResult run_neighborhoods(std::size_t sites, std::size_t replicates,
                                     std::uint64_t seed, std::size_t threads,
                                     const OptimizerConfig& optimizer) {
  if (sites < 1 || replicates < 1) throw std::invalid_argument("sites and replicates must be >= 1");
  optimizer.validate();
  const Tree truth = c_tree(2);
  const std::vector<Tree> topologies = all_topologies(truth.labels());
  const std::size_t count = topologies.size();

  struct Sample {
    double log_likelihood;
    double plain;
    double opt;
  };
  std::vector<std::vector<Sample>> samples(replicates, std::vector<Sample>(count));
  parallel_for(replicates, threads, [&](std::size_t r) {
    const PatternTable patterns =
        compress(simulate_alignment({truth, sites, replicate_seed(seed, r)}));
    for (std::size_t i = 0; i < count; ++i) {
      const OptimizedTree fitted = optimize_all(topologies[i], patterns, optimizer);
      const ReportPair pair = spr_both_fitted(fitted, patterns, optimizer);
      samples[r][i] = {fitted.log_likelihood, pair.plain.statistic, pair.opt.statistic};
    }
  });

  const auto strata = nni_distances(truth, 16);
  NeighborhoodResult result;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> ll, plain, opt;
    for (std::size_t r = 0; r < replicates; ++r) {
      ll.push_back(samples[r][i].log_likelihood);
      plain.push_back(samples[r][i].plain);
      opt.push_back(samples[r][i].opt);
    }
    NeighborhoodRow row{i, topology_string(topologies[i]), strata.at(canonical(topologies[i])),
                        moments(ll), moments(plain), moments(opt)};
    result.plain_sum += row.plain.mean;
    result.opt_sum += row.opt.mean;
    result.rows.push_back(std::move(row));
  }
  return result;
}

CsvTable NeighborhoodResult::table() const {
  CsvTable t;
  t.header = {"index",   "topology", "nni_stratum", "replicates", "log_likelihood_mean",
              "log_likelihood_sd", "plain_mean", "plain_sd", "opt_mean", "opt_sd"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.index), r.topology, std::to_string(r.nni_stratum),
                      std::to_string(r.log_likelihood.count), csv_number(r.log_likelihood.mean),
                      csv_number(r.log_likelihood.sd), csv_number(r.plain.mean),
                      csv_number(r.plain.sd), csv_number(r.opt.mean), csv_number(r.opt.sd)});
  }
  return t;
}

std::vector<TimingRow> timing_report(const ExperimentSpec& spec) {
  spec.validate();
  using Clock = std::chrono::steady_clock;
  auto time_fastest = [&](auto&& work) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < spec.timing_repeats; ++k) {
      const auto start = Clock::now();
      work();
      best = std::min(best, std::chrono::duration<double>(Clock::now() - start).count());
    }
    return best;
  };

  std::vector<TimingRow> rows;
  for (int level : spec.levels) {
    const Tree truth = c_tree(level);
    const std::size_t m = truth.leaf_count();
    std::size_t moves = 0;
    for (const auto& mv : enumerate_moves(truth)) moves += mv.type != SprType::kAdjacent;
    const std::size_t unique = neighborhood_unique(truth).size() - 1;
    for (auto n : spec.lengths) {
      const std::uint64_t seed = replicate_seed(replicate_seed(spec.seed, n), level);
      const PatternTable patterns = compress(simulate_alignment({truth, n, seed}));

      std::optional<SearchResult> found;
      const double search_seconds =
          spec.search ? time_fastest([&] { found = find_ml_tree(patterns, spec.optimizer); }) : 0.0;
      const Tree tested = found ? found->tree : truth;

      TimingRow row{level, m, n, patterns.pattern_count(), moves, unique,
                    spec.search ? to_string(found->method) : "none",
                    search_seconds, 0.0, 0.0,
                    canonical(tested) == canonical(truth), std::nullopt, std::nullopt};
      if (spec.plain) {
        row.plain_seconds = time_fastest([&] {
          row.plain = score_topology(tested, patterns, Variant::kPlain, spec.optimizer).statistic;
        });
      }
      if (spec.opt) {
        row.opt_seconds = time_fastest([&] {
          row.opt = score_topology(tested, patterns, Variant::kOpt, spec.optimizer).statistic;
        });
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

CsvTable timing_table(const std::vector<TimingRow>& rows) {
  CsvTable t;
  t.header = {"level",         "species",        "sites",         "patterns",
              "spr_moves",     "unique_neighbors", "search_method", "search_seconds",
              "plain_seconds", "opt_seconds",    "recovered",     "plain",
              "opt"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.level), std::to_string(r.species), std::to_string(r.sites),
                      std::to_string(r.patterns), std::to_string(r.spr_moves),
                      std::to_string(r.unique_neighbors), r.search_method,
                      csv_number(r.search_seconds), csv_number(r.plain_seconds),
                      csv_number(r.opt_seconds), r.recovered ? "1" : "0", csv_optional(r.plain),
                      csv_optional(r.opt)});
  }
  return t;
}

CsvTable run_experiment(const ExperimentSpec& spec) {
  switch (spec.scenario) {
    case Scenario::kScaling: return timing_table(timing_report(spec));
    case Scenario::kNeighborhoods:
      return run_neighborhoods(spec.lengths.empty() ? 512 : spec.lengths.front(), spec.replicates,
                               spec.seed, spec.threads, spec.optimizer)
          .table();
    default: return run_scenario(spec).replicate_table();
  }
}

}  // namespace cladecheck
