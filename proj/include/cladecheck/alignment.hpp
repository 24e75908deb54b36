#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cladecheck/jc69.hpp"

namespace cladecheck {

/// Parses one of A/C/G/T (either case). Anything else, including gaps and
/// ambiguity codes, throws std::invalid_argument.
Nucleotide parse_base(char c);
char base_char(Nucleotide n);

/// Equal-length DNA sequences with unique labels.
class Alignment {
 public:
  Alignment(std::vector<std::string> labels, std::vector<std::vector<Nucleotide>> rows);

  std::size_t taxon_count() const noexcept { return labels_.size(); }
  std::size_t site_count() const noexcept { return rows_.empty() ? 0 : rows_[0].size(); }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::span<const Nucleotide> row(std::size_t i) const { return rows_.at(i); }
  /// Row index for `label`, or -1.
  int find(std::string_view label) const noexcept;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<Nucleotide>> rows_;
};

Alignment parse_fasta(std::string_view text);
/// Relaxed PHYLIP: "ntaxa nsites" header, then "label sequence" lines.
/// Sequential and interleaved layouts are both accepted.
Alignment parse_phylip(std::string_view text);
/// FASTA when the first non-blank character is '>', PHYLIP otherwise.
Alignment parse_alignment(std::string_view text);
Alignment read_alignment_file(const std::string& path);
std::string write_fasta(const Alignment& alignment);

/// Distinct alignment columns with multiplicities. `states(leaf, k)` is the
/// base of leaf row `leaf` in pattern `k`; `counts(k)` its multiplicity.
struct PatternTable {
  using StateMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<std::string> labels;
  StateMatrix states;
  Eigen::VectorXd counts;

  std::size_t pattern_count() const noexcept { return static_cast<std::size_t>(counts.size()); }
  std::size_t site_count() const noexcept;
  int find(std::string_view label) const noexcept;
};

/// Merges identical columns. Patterns appear in order of first occurrence.
PatternTable compress(const Alignment& alignment);

}  // namespace cladecheck
