#include "tcrecon/rooted_tree.hpp"

#include <string>
#include <unordered_map>

#include "tcrecon/errors.hpp"

namespace tcr {

RootedTree RootedTree::from_parents(std::vector<VertexId> parents,
                                    std::vector<std::string> labels) {
  const auto n = static_cast<VertexId>(parents.size());
  if (n == 0) throw StructuralError(kNoVertex, "tree has no vertices");
  if (!labels.empty() && static_cast<VertexId>(labels.size()) != n)
    throw StructuralError(kNoVertex, "label count does not match vertex count");

  RootedTree t;
  for (VertexId v = 0; v < n; ++v) {
    VertexId p = parents[v];
    if (p == kNoVertex) {
      if (t.root_ != kNoVertex)
        throw StructuralError(v, "vertex " + std::to_string(v) +
                                     " is a second root (first root is " +
                                     std::to_string(t.root_) + ")");
      t.root_ = v;
    } else if (p < 0 || p >= n) {
      throw StructuralError(v, "vertex " + std::to_string(v) +
                                   " has out-of-range parent " + std::to_string(p));
    } else if (p == v) {
      throw StructuralError(v, "vertex " + std::to_string(v) + " is its own parent");
    }
  }
  if (t.root_ == kNoVertex)
    throw StructuralError(kNoVertex, "tree has no root (parent relation is cyclic)");

  t.child_offset_.assign(n + 1, 0);
  for (VertexId v = 0; v < n; ++v)
    if (parents[v] != kNoVertex) ++t.child_offset_[parents[v] + 1];
  for (VertexId v = 0; v < n; ++v) t.child_offset_[v + 1] += t.child_offset_[v];
  t.child_list_.resize(n > 0 ? n - 1 : 0);
  {
    std::vector<VertexId> fill(t.child_offset_.begin(), t.child_offset_.end() - 1);
    for (VertexId v = 0; v < n; ++v)
      if (parents[v] != kNoVertex) t.child_list_[fill[parents[v]]++] = v;
  }

  t.preorder_.reserve(n);
  std::vector<VertexId> stack{t.root_};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    t.preorder_.push_back(v);
    auto kids = t.children(v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  if (static_cast<VertexId>(t.preorder_.size()) != n) {
    std::vector<bool> seen(n, false);
    for (auto v : t.preorder_) seen[v] = true;
    VertexId bad = 0;
    while (seen[bad]) ++bad;
    throw StructuralError(bad, "vertex " + std::to_string(bad) +
                                   " is on a cycle or not connected to the root");
  }

  t.parent_ = std::move(parents);
  if (!labels.empty()) {
    std::unordered_map<std::string, VertexId> seen;
    for (VertexId v = 0; v < n; ++v) {
      if (!t.is_leaf(v) || labels[v].empty()) continue;
      auto [it, fresh] = seen.emplace(labels[v], v);
      if (!fresh)
        throw StructuralError(v, "leaf label '" + labels[v] + "' used by vertices " +
                                     std::to_string(it->second) + " and " +
                                     std::to_string(v));
    }
    t.labels_ = std::move(labels);
  }
  return t;
}

const std::string& RootedTree::label(VertexId v) const {
  static const std::string none;
  return labels_.empty() ? none : labels_[v];
}

std::vector<VertexId> RootedTree::leaves() const {
  std::vector<VertexId> out;
  for (auto v : preorder_)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

bool RootedTree::is_phylogenetic() const {
  for (VertexId v = 0; v < size(); ++v)
    if (v != root_ && child_count(v) == 1) return false;
  return true;
}

bool RootedTree::is_binary() const {
  for (VertexId v = 0; v < size(); ++v)
    if (!is_leaf(v) && child_count(v) != 2) return false;
  return true;
}

}  // namespace tcr
