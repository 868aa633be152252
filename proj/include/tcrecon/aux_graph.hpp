#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tcrecon/reconciliation.hpp"
#include "tcrecon/scenario.hpp"

namespace tcr {

// Provenance bits for auxiliary-graph edges.
enum AuxRule : std::uint8_t {
  kRuleA1 = 1,
  kRuleA2 = 2,
  kRuleA3 = 4,
  kRuleA4 = 8,
  kRuleA5 = 16,
};

// a1: rules A1, A2, A5 (decides a given map). a2: rules A1-A4 (decides
// existence of some time-consistent map).
enum class AuxVariant { a1, a2 };

struct AuxNode {
  enum class Kind : std::uint8_t { species, gene };
  Kind kind = Kind::species;
  VertexId vertex = kNoVertex;

  friend bool operator==(const AuxNode&, const AuxNode&) = default;
};

struct AuxEdge {
  int from = 0;
  int to = 0;
  std::uint8_t rules = 0;

  friend bool operator==(const AuxEdge&, const AuxEdge&) = default;
};

// Simple digraph with per-edge rule masks. Parallel edges are merged (their
// masks OR-ed); self-loops are kept.
class AuxGraph {
 public:
  AuxGraph(std::vector<AuxNode> nodes, std::vector<AuxEdge> edges, int seed = -1);

  int size() const { return static_cast<int>(nodes_.size()); }
  const AuxNode& node(int id) const { return nodes_[id]; }
  // Edges sorted by (from, to).
  const std::vector<AuxEdge>& edges() const { return edges_; }
  // Indices into edges().
  std::span<const int> out_edges(int id) const {
    return {out_list_.data() + out_offset_[id], out_list_.data() + out_offset_[id + 1]};
  }
  std::span<const int> in_edges(int id) const {
    return {in_list_.data() + in_offset_[id], in_list_.data() + in_offset_[id + 1]};
  }
  // Vertex placed first in topological orders when it has no in-edges.
  int seed() const { return seed_; }

  // Merged node of each gene vertex; species vertex x is node x. Filled by
  // build_aux_graph.
  std::vector<int> gene_node;

 private:
  std::vector<AuxNode> nodes_;
  std::vector<AuxEdge> edges_;
  std::vector<int> out_offset_, out_list_, in_offset_, in_list_;
  int seed_;
};

// Nodes: species vertices 0..|W|-1 (planted root last), then one node per
// duplication/transfer gene vertex in id order. Anchored gene vertices are
// merged into their images. Throws InputError if an anchored vertex is
// mapped to an edge or an event vertex to a vertex.
AuxGraph build_aux_graph(const Instance& inst, const ReconciliationMap& mu, AuxVariant variant);

// Directed cycle; nodes.front() == nodes.back(), rules[i] labels the edge
// nodes[i] -> nodes[i+1].
struct CycleWitness {
  std::vector<AuxNode> nodes;
  std::vector<std::uint8_t> rules;
  std::vector<int> ids;
};

struct TopoResult {
  std::vector<int> order;
  std::optional<CycleWitness> cycle;
  bool acyclic() const { return !cycle.has_value(); }
};

// Kahn's algorithm, seed first then lowest id first. On failure the witness
// comes from walking predecessors backward in the residual graph starting at
// its lowest id, rotated to start at its smallest node. A self-loop is
// reported directly as a cycle of length one.
TopoResult topological_order(const AuxGraph& graph);

std::string rules_to_string(std::uint8_t rules);

}  // namespace tcr
