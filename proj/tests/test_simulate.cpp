#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "cladecheck/jc69.hpp"
#include "cladecheck/simulate.hpp"
#include "cladecheck/tree.hpp"

using namespace cladecheck;

namespace {

double mismatch_fraction(const Alignment& a, std::size_t x, std::size_t y) {
  std::size_t diff = 0;
  for (std::size_t k = 0; k < a.site_count(); ++k) diff += a.row(x)[k] != a.row(y)[k];
  return static_cast<double>(diff) / static_cast<double>(a.site_count());
}

// Path length between two leaves, summed over the unique connecting path.
double path_length(const Tree& t, int from, int to) {
  std::vector<double> dist(t.node_count(), -1.0);
  dist[from] = 0.0;
  std::vector<int> stack{from};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const Edge& e : t.edges()) {
      const int w = e.a == v ? e.b : e.b == v ? e.a : -1;
      if (w >= 0 && dist[w] < 0) {
        dist[w] = dist[v] + e.length;
        stack.push_back(w);
      }
    }
  }
  return dist[to];
}

}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("deterministic in the seed") {
    const Tree t = c_tree(2);
    const Alignment a = simulate_alignment({t, 300, 42});
    const Alignment b = simulate_alignment({t, 300, 42});
    const Alignment c = simulate_alignment({t, 300, 43});
    bool differ = false;
    for (std::size_t r = 0; r < a.taxon_count(); ++r) {
      for (std::size_t k = 0; k < 300; ++k) {
        CHECK(a.row(r)[k] == b.row(r)[k]);
        differ = differ || a.row(r)[k] != c.row(r)[k];
      }
    }
    CHECK(differ);
    CHECK(a.labels()[0] == t.label(0));
    CHECK(a.site_count() == 300);
  }

  TEST_CASE("zero-length edges copy the parent") {
    const Tree t = parse_newick("((A:0,B:0):0,(C:0,D:0));");
    const Alignment a = simulate_alignment({t, 500, 1});
    for (std::size_t r = 1; r < 4; ++r) CHECK(mismatch_fraction(a, 0, r) == 0.0);
  }

  TEST_CASE("pair mismatch follows jc") {
    const Tree t({"A", "B"}, {{0, 1, 2.0}});
    const Alignment a = simulate_alignment({t, 100000, 7});
    CHECK(std::abs(mismatch_fraction(a, 0, 1) - 0.6975) < 0.005);
    CHECK(std::abs(mismatch_fraction(a, 0, 1) - jc69::expected_mismatch(2.0)) < 0.005);
  }

  TEST_CASE("base frequencies are uniform") {
    const Alignment a = simulate_alignment({c_tree(2), 20000, 3});
    for (std::size_t r = 0; r < a.taxon_count(); ++r) {
      std::array<double, 4> freq{};
      for (const Nucleotide n : a.row(r)) freq[static_cast<int>(n)] += 1.0;
      for (const double f : freq) CHECK(std::abs(f / 20000.0 - 0.25) < 0.01);
    }
  }

  TEST_CASE("pairwise mismatch on C_2 within four sigma") {
    const Tree t = c_tree(2);
    const std::size_t n = 20000;
    const Alignment a = simulate_alignment({t, n, 11});
    for (int x = 0; x < 6; ++x) {
      for (int y = x + 1; y < 6; ++y) {
        const double p = jc69::expected_mismatch(path_length(t, x, y));
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
        CHECK(std::abs(mismatch_fraction(a, x, y) - p) < 4 * sigma);
      }
    }
  }

  TEST_CASE("sites are independent") {
    // chi-square on consecutive-site state pairs of one leaf, 15 degrees of freedom
    const Alignment a = simulate_alignment({c_tree(2), 40000, 19});
    std::array<std::array<double, 4>, 4> table{};
    std::size_t pairs = 0;
    for (std::size_t k = 0; k + 1 < a.site_count(); k += 2) {
      table[static_cast<int>(a.row(0)[k])][static_cast<int>(a.row(0)[k + 1])] += 1.0;
      ++pairs;
    }
    const double expected = static_cast<double>(pairs) / 16.0;
    double chi2 = 0.0;
    for (const auto& row : table) {
      for (const double o : row) chi2 += (o - expected) * (o - expected) / expected;
    }
    CHECK(chi2 < 37.7);  // 0.999 quantile
  }

  TEST_CASE("replicate seeds do not collide") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(replicate_seed(1, i));
    CHECK(seen.size() == 10000);
    CHECK(replicate_seed(1, 0) != replicate_seed(2, 0));
    static_assert(splitmix64(0) == 0xe220a8397b1dcdafULL);
  }

  TEST_CASE("zero sites are rejected") {
    CHECK_THROWS(simulate_alignment({c_tree(2), 0, 1}));
  }
}
