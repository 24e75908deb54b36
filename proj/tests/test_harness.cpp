#include <doctest.h>

#include <cmath>
#include <limits>

#include "cladecheck/harness.hpp"
#include "cladecheck/parallel.hpp"

using namespace cladecheck;

namespace {

ExperimentSpec small_spec(Scenario scenario, std::size_t threads) {
  ExperimentSpec spec = default_spec(scenario);
  spec.lengths = {16, 256};
  spec.replicates = 4;
  spec.seed = 99;
  spec.threads = threads;
  return spec;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("csv quoting and numbers") {
    CsvTable t{{"a", "b,c"}, {{"x\"y", "1"}, {"line\nbreak", ""}}};
    CHECK(t.to_string() == "a,\"b,c\"\r\n\"x\"\"y\",1\r\n\"line\nbreak\",\r\n");
    CHECK(csv_number(0.5) == "0.5");
    CHECK(csv_number(1.0 / 3.0) == "0.333333333");
    CHECK(csv_number(1e-20) == "1e-20");
    CHECK(csv_number(std::numeric_limits<double>::quiet_NaN()).empty());
  }

  TEST_CASE("scenario names round trip") {
    for (Scenario s : {Scenario::kFourSpecies, Scenario::kC2, Scenario::kC2Long, Scenario::kC4,
                       Scenario::kScaling, Scenario::kNeighborhoods}) {
      CHECK(parse_scenario(to_string(s)) == s);
    }
    CHECK_THROWS(parse_scenario("c3"));
    CHECK(scenario_tree(Scenario::kC4).leaf_count() == 18);
    CHECK(scenario_tree(Scenario::kFourSpecies).leaf_count() == 4);
  }

  TEST_CASE("default specs") {
    const ExperimentSpec four = default_spec(Scenario::kFourSpecies);
    CHECK(four.replicates == 1000);
    CHECK(four.lengths.front() == 1);
    CHECK(four.lengths.back() == 8192);
    CHECK(four.lengths.size() == 14);
    CHECK(default_spec(Scenario::kC2).replicates == 200);
    CHECK(default_spec(Scenario::kC4).replicates == 20);
    CHECK(default_spec(Scenario::kScaling).levels == std::vector<int>{3, 4, 5, 6});
    CHECK(default_spec(Scenario::kNeighborhoods).lengths == std::vector<std::size_t>{512});
    for (Scenario s : {Scenario::kFourSpecies, Scenario::kC2, Scenario::kScaling}) {
      CHECK_NOTHROW(default_spec(s).validate());
    }
    ExperimentSpec bad = four;
    bad.plain = bad.opt = false;
    CHECK_THROWS(bad.validate());
    bad = four;
    bad.lengths = {0};
    CHECK_THROWS(bad.validate());
  }

  TEST_CASE("moments") {
    const Moments m = moments({1.0, 2.0, 3.0, 4.0});
    CHECK(m.count == 4);
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(moments({7.0}).sd == 0.0);
    CHECK(moments({}).count == 0);
  }

  TEST_CASE("scenario rows and statistics") {
    const ScenarioResult r = run_scenario(small_spec(Scenario::kFourSpecies, 1));
    CHECK(r.replicates.size() == 8);
    CHECK(r.summary.size() == 2);
    for (const ReplicateRow& row : r.replicates) {
      REQUIRE(row.plain.has_value());
      REQUIRE(row.opt.has_value());
      CHECK(*row.plain > 0.0);
      CHECK(*row.plain <= 1.0);
      CHECK(*row.opt <= *row.plain + 1e-9);
    }
    for (const SummaryRow& s : r.summary) {
      CHECK(s.recovery.count == 4);
      CHECK(s.plain_correct.count + s.plain_incorrect.count == 4);
    }
    CHECK(r.replicate_table().header.size() == 7);
    CHECK(r.summary_table().header.size() == 16);
  }

  TEST_CASE("results do not depend on the thread count") {
    const std::string serial = run_experiment(small_spec(Scenario::kC2, 1)).to_string();
    const std::string threaded = run_experiment(small_spec(Scenario::kC2, 3)).to_string();
    CHECK(serial == threaded);
  }

  TEST_CASE("plain-only runs leave opt empty") {
    ExperimentSpec spec = small_spec(Scenario::kFourSpecies, 1);
    spec.opt = false;
    const ScenarioResult r = run_scenario(spec);
    for (const ReplicateRow& row : r.replicates) {
      CHECK(row.plain.has_value());
      CHECK_FALSE(row.opt.has_value());
    }
  }

  TEST_CASE("timing report") {
    ExperimentSpec spec = default_spec(Scenario::kScaling);
    spec.levels = {2};
    spec.lengths = {64};
    const auto rows = timing_report(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].species == 6);
    CHECK(rows[0].spr_moves == 48);
    CHECK(rows[0].unique_neighbors == 30);
    CHECK(rows[0].plain_seconds >= 0.0);
    CHECK(timing_table(rows).header.size() == 13);
  }

  TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hit(50, 0);
    parallel_for(50, 4, [&](std::size_t i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
    CHECK_THROWS(parallel_for(10, 2, [](std::size_t i) {
      if (i == 3) throw std::runtime_error("boom");
    }));
  }
}
