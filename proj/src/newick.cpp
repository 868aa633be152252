#include "tcrecon/newick.hpp"

#include <string>
#include <vector>

#include "tcrecon/errors.hpp"

namespace tcr {

namespace {

struct Node {
  std::string label;
  bool tilde = false;
  int line = 1, column = 1;  // where the label (or the node) starts
  std::vector<int> kids;
};

class NewickReader {
 public:
  NewickReader(std::string_view text, const char* what) : text_(text), what_(what) {}

  // Returns the nodes with the root at index 0.
  std::vector<Node> read() {
    skip();
    nodes_.emplace_back();
    subtree(0);
    skip();
    if (peek() == ':') length();
    skip();
    if (peek() != ';') fail("expected ';'");
    ++pos_;
    skip();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return std::move(nodes_);
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    auto [l, c] = where(at);
    throw ParseError(l, c, std::string(what_) + " Newick: " + msg);
  }
  std::pair<int, int> where(std::size_t at) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '[') {
        auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  static bool label_char(char c) {
    return c != '\0' && c != '(' && c != ')' && c != ',' && c != ':' && c != ';' && c != '[' &&
           c != ' ' && c != '\t' && c != '\n' && c != '\r';
  }

  void length() {
    ++pos_;
    skip();
    std::size_t start = pos_;
    while (label_char(peek())) ++pos_;
    if (start == pos_) fail("missing branch length after ':'");
  }

  void subtree(int id) {
    skip();
    if (peek() == '~') {
      nodes_[id].tilde = true;
      ++pos_;
      skip();
    }
    if (peek() == '(') {
      ++pos_;
      do {
        skip();
        int child = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[id].kids.push_back(child);
        subtree(child);
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      } while (true);
    }
    skip();
    auto [l, c] = where(pos_);
    nodes_[id].line = l;
    nodes_[id].column = c;
    std::size_t start = pos_;
    while (label_char(peek())) ++pos_;
    nodes_[id].label = std::string(text_.substr(start, pos_ - start));
    skip();
    if (peek() == ':') length();
    if (nodes_[id].kids.empty() && nodes_[id].label.empty()) fail_at(start, "leaf without a label");
  }

  std::string_view text_;
  const char* what_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
};

// Drops unlabeled single-child roots; returns the effective root.
int effective_root(const std::vector<Node>& nodes) {
  int r = 0;
  while (nodes[r].kids.size() == 1 && nodes[r].label.empty() && !nodes[r].tilde) r = nodes[r].kids[0];
  return r;
}

// Preorder from root: (node index, parent id).
std::vector<std::pair<int, VertexId>> preorder(const std::vector<Node>& nodes, int root) {
  std::vector<std::pair<int, VertexId>> out, stack{{root, kNoVertex}};
  while (!stack.empty()) {
    auto item = stack.back();
    stack.pop_back();
    VertexId id = static_cast<VertexId>(out.size());
    out.push_back(item);
    const auto& kids = nodes[item.first].kids;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, id);
  }
  return out;
}

[[noreturn]] void fail_node(const Node& n, const char* what, const std::string& msg) {
  throw ParseError(n.line, n.column, std::string(what) + " Newick: " + msg);
}

}  // namespace

ScenarioDocument parse_newick_pair(std::string_view gene_newick, std::string_view species_newick,
                                   std::string_view sigma_tsv) {
  ScenarioDocument doc;

  auto sp = NewickReader(species_newick, "species").read();
  int sroot = effective_root(sp);
  for (auto [idx, parent] : preorder(sp, sroot)) {
    const Node& n = sp[idx];
    if (n.tilde) fail_node(n, "species", "'~' is only allowed in the gene tree");
    doc.species.push_back({static_cast<VertexId>(doc.species.size()), parent, n.label});
  }

  auto gn = NewickReader(gene_newick, "gene").read();
  int groot = effective_root(gn);
  for (auto [idx, parent] : preorder(gn, groot)) {
    const Node& n = gn[idx];
    GeneRecord r;
    r.id = static_cast<VertexId>(doc.genes.size());
    r.parent = parent;
    r.transfer_edge = n.tilde && parent != kNoVertex;
    if (n.tilde && parent == kNoVertex) fail_node(n, "gene", "'~' on the root");
    if (n.kids.empty()) {
      if (n.label.find('#') != std::string::npos)
        fail_node(n, "gene", "leaf label '" + n.label + "' carries an event suffix");
      r.event = Event::leaf;
      r.name = n.label;
    } else {
      auto hash = n.label.rfind('#');
      if (hash == std::string::npos || hash + 2 != n.label.size())
        fail_node(n, "gene", "interior label '" + n.label + "' lacks an event suffix #S, #D or #H");
      switch (n.label[hash + 1]) {
        case 'S': r.event = Event::speciation; break;
        case 'D': r.event = Event::duplication; break;
        case 'H': r.event = Event::transfer; break;
        default: fail_node(n, "gene", "unknown event suffix in '" + n.label + "'");
      }
      r.name = n.label.substr(0, hash);
    }
    doc.genes.push_back(std::move(r));
  }

  int line = 0;
  std::size_t pos = 0;
  while (pos <= sigma_tsv.size()) {
    auto nl = sigma_tsv.find('\n', pos);
    std::string_view row = sigma_tsv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line;
    pos = nl == std::string_view::npos ? sigma_tsv.size() + 1 : nl + 1;
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (row.empty() || row[0] == '#') continue;
    auto tab = row.find('\t');
    if (tab == std::string_view::npos || row.find('\t', tab + 1) != std::string_view::npos)
      throw ParseError(line, 1, "sigma TSV: expected 'gene<TAB>species'");
    std::string gene(row.substr(0, tab)), species(row.substr(tab + 1));
    if (gene.empty() || species.empty()) throw ParseError(line, 1, "sigma TSV: empty field");
    if (!doc.sigma.emplace(gene, species).second)
      throw ParseError(line, 1, "sigma TSV: gene '" + gene + "' listed twice");
  }
  return doc;
}

}  // namespace tcr
