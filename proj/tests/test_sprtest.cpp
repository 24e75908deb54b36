#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cladecheck/likelihood.hpp"
#include "cladecheck/simulate.hpp"
#include "cladecheck/sprtest.hpp"
#include "helpers.hpp"

using namespace cladecheck;

namespace {

const Tree& four_species() {
  static const Tree t = parse_newick("((A:1,B:1):2,(C:1,D:1));");
  return t;
}

}  // namespace

TEST_SUITE("sprtest") {
  TEST_CASE("statistic lies in (0, 1] and opt never exceeds plain") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 8; ++rep) {
      const std::size_t m = 4 + rep % 3;
      const Tree t = testing::random_tree(m, rng);
      const PatternTable p = compress(simulate_alignment({t, 200, rng()}));
      const ReportPair r = spr_both(t, p);
      for (const TestReport* report : {&r.plain, &r.opt}) {
        CHECK(report->statistic > 0.0);
        CHECK(report->statistic <= 1.0);
        CHECK(std::abs(report->statistic - std::exp(report->numerator - report->denominator)) <
              1e-12);
      }
      CHECK(r.opt.statistic <= r.plain.statistic + 1e-9);
    }
  }

  TEST_CASE("report structure") {
    const PatternTable p = compress(simulate_alignment({four_species(), 100, 3}));
    const TestReport plain = spr_plain(four_species(), p);
    CHECK(plain.variant == Variant::kPlain);
    CHECK(plain.neighbors.size() == 9);  // self plus 8 one-away moves
    CHECK_FALSE(plain.neighbors.front().move.has_value());
    CHECK(std::abs(plain.numerator - log_likelihood(plain.tree, p)) < 1e-9);

    const TestReport opt = spr_opt(four_species(), p);
    CHECK(opt.variant == Variant::kOpt);
    CHECK(opt.neighbors.size() == 3);  // one entry per unique topology
    for (const auto& n : opt.neighbors) CHECK(n.weight == Weight{1, 1});
    CHECK(std::abs(opt.numerator - plain.numerator) < 1e-9);
  }

  TEST_CASE("alignment overload matches pattern overload") {
    const Alignment a = simulate_alignment({c_tree(2), 300, 9});
    CHECK(spr_plain(c_tree(2), a).statistic == spr_plain(c_tree(2), compress(a)).statistic);
    CHECK(spr_opt(c_tree(2), a).statistic == spr_opt(c_tree(2), compress(a)).statistic);
  }

  TEST_CASE("long alignments give near-certain support") {
    const PatternTable p = compress(simulate_alignment({four_species(), 8192, 1}));
    const ReportPair r = spr_both(four_species(), p);
    CHECK(r.plain.statistic > 0.99);
    CHECK(r.opt.statistic > 0.99);
  }

  TEST_CASE("a single site gives weak plain support") {
    const PatternTable p = compress(simulate_alignment({four_species(), 1, 2}));
    CHECK(spr_plain(four_species(), p).statistic < 0.5);
  }

  TEST_CASE("an incorrect topology scores low under opt") {
    const PatternTable p = compress(simulate_alignment({four_species(), 4096, 6}));
    const Tree wrong = parse_newick("((A:1,C:1):2,(B:1,D:1));");
    CHECK(spr_opt(wrong, p).statistic < 0.5);
  }

  TEST_CASE("invariant under taxon relabelling") {
    const Tree t = c_tree(2);
    const Alignment a = simulate_alignment({t, 400, 12});
    std::vector<std::string> renamed;
    for (const auto& l : a.labels()) renamed.push_back("x" + l);
    std::vector<std::vector<Nucleotide>> rows;
    for (std::size_t r = 0; r < a.taxon_count(); ++r) rows.emplace_back(a.row(r).begin(), a.row(r).end());
    // reverse row order as well
    std::reverse(renamed.begin(), renamed.end());
    std::reverse(rows.begin(), rows.end());
    std::string text = write_newick(t);
    for (int i = 6; i >= 1; --i) {
      const std::string from = "S" + std::to_string(i);
      for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + 2)) {
        text.replace(pos, from.size(), "x" + from);
      }
    }
    const Tree t2 = parse_newick(text);
    const PatternTable p1 = compress(a);
    const PatternTable p2 = compress(Alignment(renamed, rows));
    // fitted lengths depend on sweep order, so converge tightly before comparing;
    // a line search resolves lengths only to about sqrt(machine epsilon)
    OptimizerConfig tight;
    tight.branch_tolerance = 1e-10;
    tight.round_tolerance = 1e-11;
    tight.max_rounds = 200;
    CHECK(spr_plain(t, p1, tight).statistic ==
          doctest::Approx(spr_plain(t2, p2, tight).statistic).epsilon(1e-6));
    CHECK(spr_opt(t, p1, tight).statistic ==
          doctest::Approx(spr_opt(t2, p2, tight).statistic).epsilon(1e-6));
  }

  TEST_CASE("score_topology dispatches on variant") {
    const PatternTable p = compress(simulate_alignment({four_species(), 64, 4}));
    CHECK(score_topology(four_species(), p, Variant::kPlain).variant == Variant::kPlain);
    CHECK(score_topology(four_species(), p, Variant::kOpt).variant == Variant::kOpt);
    CHECK(parse_variant("plain") == Variant::kPlain);
    CHECK(parse_variant("opt") == Variant::kOpt);
    CHECK_THROWS(parse_variant("both"));
  }

  TEST_CASE("fitted pair agrees with separate runs") {
    const PatternTable p = compress(simulate_alignment({c_tree(2), 500, 14}));
    const OptimizedTree fit = optimize_all(c_tree(2), p);
    const ReportPair both = spr_both_fitted(fit, p);
    CHECK(both.plain.statistic == doctest::Approx(spr_plain(c_tree(2), p).statistic).epsilon(1e-6));
    CHECK(both.opt.statistic == doctest::Approx(spr_opt(c_tree(2), p).statistic).epsilon(1e-6));
  }
}
