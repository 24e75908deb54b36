#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "cladecheck/tree.hpp"
#include "tree_walk.hpp"

namespace cladecheck {

namespace {

bool is_label_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '.' || c == '-';
}

struct RawNode {
  std::string label;
  double length = 0.0;
  std::vector<int> children;
  std::size_t position = 0;
};

class NewickReader {
 public:
  explicit NewickReader(std::string_view text) : text_(text) {}

  std::vector<RawNode> read() {
    subtree();
    skip_space();
    if (peek() != ';') fail("expected ';'");
    ++pos_;
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return std::move(nodes_);
  }

 private:
  int subtree() {
    skip_space();
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].position = pos_;
    if (peek() == '(') {
      ++pos_;
      while (true) {
        const int child = subtree();
        nodes_[id].children.push_back(child);
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
      skip_space();
      nodes_[id].label = label();  // internal labels are read and dropped
    } else {
      nodes_[id].label = label();
      if (nodes_[id].label.empty()) fail("expected a leaf label");
    }
    skip_space();
    if (peek() == ':') {
      ++pos_;
      skip_space();
      nodes_[id].length = number();
    }
    return id;
  }

  std::string label() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) fail("malformed branch length");
    if (!std::isfinite(value)) fail("non-finite branch length");
    if (value < 0.0) fail("negative branch length");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<RawNode> nodes_;
};

}  // namespace

Tree parse_newick(std::string_view text) {
  std::vector<RawNode> raw = NewickReader(text).read();
  const RawNode& root = raw[0];
  if (root.children.empty()) throw ParseError("a tree needs at least two leaves", 0);
  if (root.children.size() == 1) throw ParseError("unary root", root.position);
  if (root.children.size() > 3) throw ParseError("multifurcating root", root.position);

  // Ids: leaves in order of appearance, internal nodes after them.
  std::vector<int> id(raw.size(), -1);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].children.empty()) {
      id[i] = static_cast<int>(labels.size());
      labels.push_back(raw[i].label);
    } else if (i != 0) {
      if (raw[i].children.size() != 2) {
        throw ParseError("internal nodes must have exactly two children", raw[i].position);
      }
    }
  }
  int next = static_cast<int>(labels.size());
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!raw[i].children.empty()) id[i] = next++;
  }
  const bool merge_root = root.children.size() == 2;
  if (!merge_root) id[0] = next++;

  std::vector<Edge> edges;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    for (int c : raw[i].children) edges.push_back({id[i], id[c], raw[c].length});
  }
  if (merge_root) {
    const int c1 = root.children[0];
    const int c2 = root.children[1];
    edges.push_back({id[c1], id[c2], raw[c1].length + raw[c2].length});
  } else {
    for (int c : root.children) edges.push_back({id[0], id[c], raw[c].length});
  }

  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (labels[i] == labels[j]) throw ParseError("duplicate leaf label '" + labels[i] + "'", 0);
    }
  }
  return Tree(std::move(labels), std::move(edges));
}

namespace {

void append_length(std::string& out, double length) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), length);
  out.push_back(':');
  out.append(buf, ptr);
}

}  // namespace

std::string write_newick(const Tree& tree, bool with_lengths) {
  const std::size_t m = tree.leaf_count();
  int smallest = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (tree.label(static_cast<int>(i)) < tree.label(smallest)) smallest = static_cast<int>(i);
  }
  std::string out = "(";
  if (m == 2) {
    const int other = 1 - smallest;
    out += tree.label(smallest);
    if (with_lengths) append_length(out, tree.edge(0).length);
    out += ',';
    out += tree.label(other);
    if (with_lengths) append_length(out, 0.0);
    out += ");";
    return out;
  }

  const int root = tree.other_end(tree.incident(smallest)[0], smallest);
  const auto walk = detail::preorder(tree, root);
  std::vector<const std::string*> min_label(tree.node_count(), nullptr);
  for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
    const int v = it->node;
    if (tree.is_leaf(v)) min_label[v] = &tree.label(v);
    if (it->parent_edge < 0) continue;
    const int p = tree.other_end(it->parent_edge, v);
    if (min_label[p] == nullptr || *min_label[v] < *min_label[p]) min_label[p] = min_label[v];
  }

  auto children = [&](int v, int parent_edge) {
    std::vector<std::pair<int, int>> kids;  // (child, edge)
    for (int e : tree.incident(v)) {
      if (e != parent_edge) kids.emplace_back(tree.other_end(e, v), e);
    }
    std::sort(kids.begin(), kids.end(),
              [&](auto x, auto y) { return *min_label[x.first] < *min_label[y.first]; });
    return kids;
  };

  auto write = [&](auto&& self, int v, int parent_edge) -> void {
    if (tree.is_leaf(v)) {
      out += tree.label(v);
    } else {
      out += '(';
      bool first = true;
      for (auto [c, e] : children(v, parent_edge)) {
        if (!first) out += ',';
        first = false;
        self(self, c, e);
      }
      out += ')';
    }
    if (with_lengths) append_length(out, tree.edge(parent_edge).length);
  };

  bool first = true;
  for (auto [c, e] : children(root, -1)) {
    if (!first) out += ',';
    first = false;
    write(write, c, e);
  }
  out += ");";
  return out;
}

}  // namespace cladecheck
