#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tcrecon/ancestor_index.hpp"
#include "tcrecon/report.hpp"
#include "tcrecon/rooted_tree.hpp"

namespace tcr {

enum class Event : std::uint8_t { speciation, duplication, transfer, leaf };

const char* to_string(Event e);
std::optional<Event> parse_event(std::string_view s);

// Speciations and leaves are pinned to species vertices; duplications and
// transfers sit on species edges.
inline bool on_vertex(Event e) { return e == Event::speciation || e == Event::leaf; }

// Event-labeled gene tree. transfer_in[v] marks the edge (parent(v), v) as a
// transfer edge; species[v] is the species name of leaf v (empty for
// interior vertices).
class GeneTree {
 public:
  GeneTree() = default;
  // Throws InputError if labels and shape disagree: leaf event on an interior
  // vertex or vice versa, a transfer edge leaving a non-transfer vertex, a
  // transfer flag on the root, or a leaf without species.
  GeneTree(RootedTree tree, std::vector<Event> events,
           std::vector<bool> transfer_in, std::vector<std::string> species);

  const RootedTree& tree() const { return tree_; }
  VertexId size() const { return tree_.size(); }
  Event event(VertexId v) const { return events_[v]; }
  bool transfer_in(VertexId v) const { return transfer_in_[v]; }
  const std::string& species(VertexId v) const { return species_[v]; }
  const std::string& name(VertexId v) const { return tree_.label(v); }

 private:
  RootedTree tree_;
  std::vector<Event> events_;
  std::vector<bool> transfer_in_;
  std::vector<std::string> species_;
};

// Species tree with a planted root. Raw vertex ids are kept; the planted root
// gets id n (one past the raw tree).
class SpeciesTree {
 public:
  SpeciesTree() = default;

  const RootedTree& tree() const { return tree_; }
  const AncestorIndex& index() const { return index_; }
  VertexId size() const { return tree_.size(); }
  VertexId planted_root() const { return tree_.root(); }
  VertexId core_root() const { return core_root_; }
  const std::string& name(VertexId v) const { return tree_.label(v); }
  // Leaf with the given name, or kNoVertex.
  VertexId find(const std::string& name) const;

 private:
  friend SpeciesTree augment_species_tree(const RootedTree& raw);
  RootedTree tree_;
  AncestorIndex index_;
  VertexId core_root_ = kNoVertex;
  std::unordered_map<std::string, VertexId> by_name_;
};

// Throws PreconditionError unless raw is non-empty, phylogenetic, has a root
// with zero or at least two children, and names every leaf.
SpeciesTree augment_species_tree(const RootedTree& raw);

// Components of the gene tree after deleting transfer edges. Components are
// numbered by ascending root id.
struct TransferForest {
  std::vector<int> component;
  std::vector<VertexId> roots;
};

TransferForest remove_transfer_edges(const GeneTree& g);

// A gene tree together with its species tree, with sigma resolved to species
// vertex ids and the usual indices built once.
class Instance {
 public:
  // Throws InputError naming the first leaf whose species is unknown.
  Instance(GeneTree gene, SpeciesTree species);

  const GeneTree& gene() const { return gene_; }
  const SpeciesTree& species() const { return species_; }
  const RootedTree& gene_tree() const { return gene_.tree(); }
  const RootedTree& species_tree() const { return species_.tree(); }
  const AncestorIndex& gene_index() const { return gene_index_; }
  const AncestorIndex& species_index() const { return species_.index(); }
  const TransferForest& forest() const { return forest_; }
  VertexId gene_size() const { return gene_.size(); }
  VertexId species_size() const { return species_.size(); }
  Event event(VertexId v) const { return gene_.event(v); }
  bool transfer_in(VertexId v) const { return gene_.transfer_in(v); }
  // Species vertex of leaf v; kNoVertex for interior vertices.
  VertexId sigma(VertexId v) const { return sigma_[v]; }

 private:
  GeneTree gene_;
  SpeciesTree species_;
  AncestorIndex gene_index_;
  TransferForest forest_;
  std::vector<VertexId> sigma_;
};

// Species of the leaves below v inside v's transfer-free component, sorted by
// id.
std::vector<VertexId> sigma_hat(const Instance& inst, VertexId v);

// Reports O1, O2, Sigma1 and Sigma2 violations. Empty means the instance is
// accepted as observable input.
Report check_observability(const Instance& inst);

}  // namespace tcr
