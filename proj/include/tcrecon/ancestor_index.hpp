#pragma once

#include <compare>
#include <span>
#include <vector>

#include "tcrecon/rooted_tree.hpp"

namespace tcr {

// A vertex v or a tree edge (upper, lower) with upper = parent(lower). For a
// vertex both fields hold v.
struct TreeElement {
  enum class Kind : std::uint8_t { vertex, edge };

  Kind kind = Kind::vertex;
  VertexId upper = kNoVertex;
  VertexId lower = kNoVertex;

  static TreeElement vertex(VertexId v) { return {Kind::vertex, v, v}; }
  static TreeElement edge(VertexId parent, VertexId child) {
    return {Kind::edge, parent, child};
  }
  bool is_vertex() const { return kind == Kind::vertex; }
  bool is_edge() const { return kind == Kind::edge; }

  friend auto operator<=>(const TreeElement&, const TreeElement&) = default;
};

// Position of the first argument relative to the second.
enum class Relation { ancestor, descendant, equal, incomparable };

const char* to_string(Relation r);

// Ancestor queries on an immutable tree. Interval containment answers
// is_ancestor in O(1); lca uses a sparse table over the preorder sequence
// (O(n log n) build, O(1) query).
class AncestorIndex {
 public:
  AncestorIndex() = default;
  explicit AncestorIndex(const RootedTree& tree);

  VertexId size() const { return static_cast<VertexId>(parent_.size()); }

  // u is an ancestor of v or u == v.
  bool is_ancestor(VertexId u, VertexId v) const {
    return entry_[u] <= entry_[v] && entry_[v] < exit_[u];
  }
  bool comparable(VertexId u, VertexId v) const {
    return is_ancestor(u, v) || is_ancestor(v, u);
  }
  int depth(VertexId v) const { return depth_[v]; }

  VertexId lca(VertexId u, VertexId v) const;
  // Throws PreconditionError on an empty set.
  VertexId lca(std::span<const VertexId> vs) const;

  Relation compare(VertexId x, VertexId y) const;

  // Extended order on vertices and edges: x < (u,v) iff x <= v,
  // (u,v) < x iff u <= x, (u,v) <= (a,b) iff v <= b.
  bool precedes_or_equal(const TreeElement& x, const TreeElement& y) const;
  Relation compare(const TreeElement& x, const TreeElement& y) const;
  bool comparable(const TreeElement& x, const TreeElement& y) const {
    return compare(x, y) != Relation::incomparable;
  }

  // True if x names a vertex or an actual parent-child edge of this tree.
  bool valid(const TreeElement& x) const;

  // Leaves below v, in preorder.
  std::span<const VertexId> leaf_set(VertexId v) const {
    return {leaf_order_.data() + leaf_begin_[v],
            leaf_order_.data() + leaf_end_[v]};
  }

  int entry(VertexId v) const { return entry_[v]; }
  int exit(VertexId v) const { return exit_[v]; }
  // Vertex at a given preorder position.
  VertexId at_entry(int pos) const { return order_[pos]; }

 private:
  VertexId shallower(VertexId a, VertexId b) const {
    return depth_[a] <= depth_[b] ? a : b;
  }
  void require(const TreeElement& x) const;

  std::vector<VertexId> parent_;
  std::vector<int> entry_;
  std::vector<int> exit_;
  std::vector<int> depth_;
  std::vector<VertexId> order_;
  std::vector<VertexId> leaf_order_;
  std::vector<int> leaf_begin_;
  std::vector<int> leaf_end_;
  // sparse_[k][i] = shallowest vertex among order_[i .. i + 2^k).
  std::vector<std::vector<VertexId>> sparse_;
};

}  // namespace tcr
