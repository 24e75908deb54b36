#include "cladecheck/alignment.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cladecheck/tree.hpp"

namespace cladecheck {

Nucleotide parse_base(char c) {
  switch (c) {
    case 'A': case 'a': return Nucleotide::A;
    case 'C': case 'c': return Nucleotide::C;
    case 'G': case 'g': return Nucleotide::G;
    case 'T': case 't': return Nucleotide::T;
    default:
      throw std::invalid_argument(std::string("unsupported character '") + c +
                                  "' (only A, C, G, T are accepted)");
  }
}

char base_char(Nucleotide n) { return "ACGT"[static_cast<int>(n)]; }

Alignment::Alignment(std::vector<std::string> labels, std::vector<std::vector<Nucleotide>> rows)
    : labels_(std::move(labels)), rows_(std::move(rows)) {
  if (labels_.empty()) throw std::invalid_argument("alignment has no sequences");
  if (labels_.size() != rows_.size()) throw std::invalid_argument("label/row count mismatch");
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw std::invalid_argument("empty sequence label");
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate sequence label '" + l + "'");
  }
  const std::size_t n = rows_[0].size();
  if (n == 0) throw std::invalid_argument("alignment has no sites");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != n) {
      throw std::invalid_argument("sequence '" + labels_[i] + "' has length " +
                                  std::to_string(rows_[i].size()) + ", expected " +
                                  std::to_string(n));
    }
  }
}

int Alignment::find(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

void append_bases(std::vector<Nucleotide>& row, std::string_view chunk, std::size_t line) {
  for (char c : chunk) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    try {
      row.push_back(parse_base(c));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line);
    }
  }
}

}  // namespace

Alignment parse_fasta(std::string_view text) {
  std::vector<std::string> labels;
  std::vector<std::vector<Nucleotide>> rows;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (line.front() == '>') {
      auto header = trim(line.substr(1));
      // Only the first word of a header is the label.
      const auto space = header.find_first_of(" \t");
      labels.emplace_back(header.substr(0, space));
      if (labels.back().empty()) throw ParseError("empty FASTA header", i + 1);
      rows.emplace_back();
      continue;
    }
    if (rows.empty()) throw ParseError("sequence data before first FASTA header", i + 1);
    append_bases(rows.back(), line, i + 1);
  }
  if (labels.empty()) throw ParseError("no FASTA records", 0);
  return Alignment(std::move(labels), std::move(rows));
}

Alignment parse_phylip(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size()) throw ParseError("empty PHYLIP input", 0);
  std::size_t taxa = 0;
  std::size_t sites = 0;
  {
    std::istringstream header{std::string(trim(lines[i]))};
    if (!(header >> taxa >> sites) || taxa == 0 || sites == 0) {
      throw ParseError("PHYLIP header must be 'ntaxa nsites'", i + 1);
    }
  }
  ++i;
  std::vector<std::string> labels;
  std::vector<std::vector<Nucleotide>> rows;
  std::size_t next_row = 0;
  for (; i < lines.size(); ++i) {
    auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (labels.size() < taxa) {
      const auto space = line.find_first_of(" \t");
      if (space == std::string_view::npos) throw ParseError("expected 'label sequence'", i + 1);
      labels.emplace_back(line.substr(0, space));
      rows.emplace_back();
      append_bases(rows.back(), line.substr(space), i + 1);
    } else {
      // Interleaved continuation blocks, rows in the original order.
      append_bases(rows[next_row], line, i + 1);
      next_row = (next_row + 1) % taxa;
    }
  }
  if (labels.size() != taxa) throw ParseError("fewer sequences than the PHYLIP header says", i);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != sites) {
      throw ParseError("sequence '" + labels[r] + "' does not have " + std::to_string(sites) +
                           " sites",
                       0);
    }
  }
  return Alignment(std::move(labels), std::move(rows));
}

Alignment parse_alignment(std::string_view text) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '>') return parse_fasta(text);
  return parse_phylip(text);
}

Alignment read_alignment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open alignment file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_alignment(buf.str());
}

std::string write_fasta(const Alignment& alignment) {
  std::string out;
  out.reserve(alignment.taxon_count() * (alignment.site_count() + 16));
  for (std::size_t i = 0; i < alignment.taxon_count(); ++i) {
    out += '>';
    out += alignment.labels()[i];
    out += '\n';
    for (Nucleotide n : alignment.row(i)) out += base_char(n);
    out += '\n';
  }
  return out;
}

std::size_t PatternTable::site_count() const noexcept {
  double total = counts.sum();
  return static_cast<std::size_t>(total + 0.5);
}

int PatternTable::find(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

PatternTable compress(const Alignment& alignment) {
  const std::size_t taxa = alignment.taxon_count();
  const std::size_t sites = alignment.site_count();
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> first_site;
  std::vector<double> counts;
  std::string key(taxa, '\0');
  for (std::size_t s = 0; s < sites; ++s) {
    for (std::size_t t = 0; t < taxa; ++t) key[t] = static_cast<char>(alignment.row(t)[s]);
    auto [it, inserted] = index.try_emplace(key, counts.size());
    if (inserted) {
      first_site.push_back(s);
      counts.push_back(1.0);
    } else {
      counts[it->second] += 1.0;
    }
  }
  PatternTable table;
  table.labels.assign(alignment.labels().begin(), alignment.labels().end());
  table.states.resize(static_cast<Eigen::Index>(taxa), static_cast<Eigen::Index>(counts.size()));
  for (std::size_t k = 0; k < first_site.size(); ++k) {
    for (std::size_t t = 0; t < taxa; ++t) {
      table.states(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) =
          static_cast<std::uint8_t>(alignment.row(t)[first_site[k]]);
    }
  }
  table.counts = Eigen::Map<const Eigen::VectorXd>(counts.data(), static_cast<Eigen::Index>(counts.size()));
  return table;
}

}  // namespace cladecheck
