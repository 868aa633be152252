#include "tcrecon/ancestor_index.hpp"

#include <bit>

#include "tcrecon/errors.hpp"

namespace tcr {

const char* to_string(Relation r) {
  switch (r) {
    case Relation::ancestor: return "ancestor";
    case Relation::descendant: return "descendant";
    case Relation::equal: return "equal";
    case Relation::incomparable: return "incomparable";
  }
  return "?";
}

AncestorIndex::AncestorIndex(const RootedTree& tree) {
  const VertexId n = tree.size();
  parent_.assign(tree.parents().begin(), tree.parents().end());
  entry_.assign(n, 0);
  exit_.assign(n, 0);
  depth_.assign(n, 0);
  leaf_begin_.assign(n, 0);
  leaf_end_.assign(n, 0);
  order_.assign(tree.preorder().begin(), tree.preorder().end());

  for (int i = 0; i < n; ++i) {
    VertexId v = order_[i];
    entry_[v] = i;
    if (parent_[v] != kNoVertex) depth_[v] = depth_[parent_[v]] + 1;
    if (tree.is_leaf(v)) leaf_order_.push_back(v);
  }
  // Subtree sizes and leaf ranges by a reverse preorder sweep.
  std::vector<int> size(n, 1), leaves(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    VertexId v = order_[i];
    if (tree.is_leaf(v)) leaves[v] = 1;
    if (parent_[v] != kNoVertex) {
      size[parent_[v]] += size[v];
      leaves[parent_[v]] += leaves[v];
    }
  }
  int leaf_pos = 0;
  for (int i = 0; i < n; ++i) {
    VertexId v = order_[i];
    exit_[v] = entry_[v] + size[v];
    // Leaves before v in preorder are exactly the ones not below v that
    // precede it, so the running count gives v's first leaf slot.
    leaf_begin_[v] = leaf_pos;
    leaf_end_[v] = leaf_pos + leaves[v];
    if (tree.is_leaf(v)) ++leaf_pos;
  }

  int levels = std::bit_width(static_cast<unsigned>(n));
  sparse_.assign(levels, {});
  sparse_[0] = order_;
  for (int k = 1; k < levels; ++k) {
    int len = n - (1 << k) + 1;
    sparse_[k].resize(len);
    for (int i = 0; i < len; ++i)
      sparse_[k][i] = shallower(sparse_[k - 1][i], sparse_[k - 1][i + (1 << (k - 1))]);
  }
}

VertexId AncestorIndex::lca(VertexId u, VertexId v) const {
  if (is_ancestor(u, v)) return u;
  if (is_ancestor(v, u)) return v;
  int a = entry_[u], b = entry_[v];
  if (a > b) std::swap(a, b);
  // The shallowest vertex in preorder positions (a, b] is a child of the lca.
  ++a;
  int k = std::bit_width(static_cast<unsigned>(b - a + 1)) - 1;
  VertexId m = shallower(sparse_[k][a], sparse_[k][b - (1 << k) + 1]);
  return parent_[m];
}

VertexId AncestorIndex::lca(std::span<const VertexId> vs) const {
  if (vs.empty()) throw PreconditionError("lca of an empty vertex set");
  VertexId r = vs.front();
  for (auto v : vs.subspan(1)) r = lca(r, v);
  return r;
}

Relation AncestorIndex::compare(VertexId x, VertexId y) const {
  if (x == y) return Relation::equal;
  if (is_ancestor(x, y)) return Relation::ancestor;
  if (is_ancestor(y, x)) return Relation::descendant;
  return Relation::incomparable;
}

bool AncestorIndex::valid(const TreeElement& x) const {
  auto in = [&](VertexId v) { return v >= 0 && v < size(); };
  if (x.is_vertex()) return in(x.upper) && x.upper == x.lower;
  return in(x.upper) && in(x.lower) && parent_[x.lower] == x.upper;
}

void AncestorIndex::require(const TreeElement& x) const {
  if (!valid(x)) throw PreconditionError("element is not a vertex or edge of this tree");
}

bool AncestorIndex::precedes_or_equal(const TreeElement& x,
                                      const TreeElement& y) const {
  require(x);
  require(y);
  // Below an edge means below its lower end; below a vertex y means the
  // element's upper end lies under y.
  if (y.is_edge()) return is_ancestor(y.lower, x.lower);
  return is_ancestor(y.upper, x.upper);
}

Relation AncestorIndex::compare(const TreeElement& x, const TreeElement& y) const {
  if (x == y) return Relation::equal;
  bool below = precedes_or_equal(x, y);
  bool above = precedes_or_equal(y, x);
  if (below && above) return Relation::equal;
  if (below) return Relation::descendant;
  if (above) return Relation::ancestor;
  return Relation::incomparable;
}

}  // namespace tcr
