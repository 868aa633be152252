#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tcr {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

// Immutable rooted tree over dense vertex ids 0..n-1. Children are kept in
// ascending id order, which fixes every downstream tie-break.
class RootedTree {
 public:
  RootedTree() = default;

  // parents[v] is the parent of v, or kNoVertex for the root. `labels` is
  // either empty or has one entry per vertex (empty string = unlabeled).
  // Throws StructuralError on an empty tree, several roots, an out-of-range
  // parent, a cycle, or two leaves sharing a label.
  static RootedTree from_parents(std::vector<VertexId> parents,
                                 std::vector<std::string> labels = {});

  VertexId size() const { return static_cast<VertexId>(parent_.size()); }
  bool empty() const { return parent_.empty(); }
  VertexId root() const { return root_; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  std::span<const VertexId> parents() const { return parent_; }
  std::span<const VertexId> children(VertexId v) const {
    return {child_list_.data() + child_offset_[v],
            child_list_.data() + child_offset_[v + 1]};
  }
  std::size_t child_count(VertexId v) const {
    return static_cast<std::size_t>(child_offset_[v + 1] - child_offset_[v]);
  }
  bool is_leaf(VertexId v) const { return child_count(v) == 0; }
  bool is_root(VertexId v) const { return v == root_; }
  bool contains(VertexId v) const { return v >= 0 && v < size(); }

  bool has_labels() const { return !labels_.empty(); }
  const std::string& label(VertexId v) const;

  // Root-first order; parents precede children, siblings in id order.
  std::span<const VertexId> preorder() const { return preorder_; }
  std::vector<VertexId> leaves() const;

  // No non-root interior vertex has exactly one child.
  bool is_phylogenetic() const;
  // Every interior vertex has exactly two children.
  bool is_binary() const;

 private:
  std::vector<VertexId> parent_;
  std::vector<VertexId> child_offset_;
  std::vector<VertexId> child_list_;
  std::vector<VertexId> preorder_;
  std::vector<std::string> labels_;
  VertexId root_ = kNoVertex;
};

}  // namespace tcr
