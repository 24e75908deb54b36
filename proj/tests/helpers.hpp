#pragma once

#include <random>
#include <string>
#include <vector>

#include "cladecheck/alignment.hpp"
#include "cladecheck/search.hpp"
#include "cladecheck/tree.hpp"

namespace testing {

inline std::vector<std::string> letters(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
  return out;
}

/// Random topology by random leaf insertion, lengths uniform on [lo, hi].
inline cladecheck::Tree random_tree(std::size_t m, std::mt19937_64& rng, double lo = 0.01,
                                    double hi = 1.0) {
  const auto labels = letters(m);
  std::uniform_real_distribution<double> len(lo, hi);
  cladecheck::Tree t({labels[0], labels[1], labels[2]},
                     {{3, 0, len(rng)}, {3, 1, len(rng)}, {3, 2, len(rng)}});
  for (std::size_t k = 3; k < m; ++k) {
    std::uniform_int_distribution<int> edge(0, static_cast<int>(t.edge_count()) - 1);
    t = cladecheck::insert_leaf(t, edge(rng), labels[k], len(rng));
  }
  std::vector<double> lengths(t.edge_count());
  for (double& l : lengths) l = len(rng);
  return t.with_lengths(lengths);
}

inline cladecheck::Alignment random_alignment(const std::vector<std::string>& labels,
                                              std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> base(0, 3);
  std::vector<std::vector<cladecheck::Nucleotide>> rows(labels.size());
  for (auto& r : rows) {
    for (std::size_t s = 0; s < n; ++s) r.push_back(static_cast<cladecheck::Nucleotide>(base(rng)));
  }
  return cladecheck::Alignment(labels, std::move(rows));
}

/// Alignment from label/sequence pairs given as FASTA text.
inline cladecheck::PatternTable table(const std::string& fasta) {
  return cladecheck::compress(cladecheck::parse_fasta(fasta));
}

}  // namespace testing
