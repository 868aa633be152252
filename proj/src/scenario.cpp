#include "tcrecon/scenario.hpp"

#include <algorithm>
#include <memory>
#include <unordered_set>

#include "tcrecon/errors.hpp"

namespace tcr {

const char* to_string(Event e) {
  switch (e) {
    case Event::speciation: return "speciation";
    case Event::duplication: return "duplication";
    case Event::transfer: return "transfer";
    case Event::leaf: return "leaf";
  }
  return "?";
}

std::optional<Event> parse_event(std::string_view s) {
  if (s == "speciation") return Event::speciation;
  if (s == "duplication") return Event::duplication;
  if (s == "transfer") return Event::transfer;
  if (s == "leaf") return Event::leaf;
  return std::nullopt;
}

GeneTree::GeneTree(RootedTree tree, std::vector<Event> events,
                   std::vector<bool> transfer_in, std::vector<std::string> species)
    : tree_(std::move(tree)),
      events_(std::move(events)),
      transfer_in_(std::move(transfer_in)),
      species_(std::move(species)) {
  const auto n = static_cast<std::size_t>(tree_.size());
  if (events_.size() != n || transfer_in_.size() != n || species_.size() != n)
    throw InputError("gene tree label arrays do not match the vertex count");
  for (VertexId v = 0; v < tree_.size(); ++v) {
    const std::string id = "gene vertex " + std::to_string(v);
    if (tree_.is_leaf(v) != (events_[v] == Event::leaf))
      throw InputError(id + (tree_.is_leaf(v) ? " is a leaf but not labeled leaf"
                                              : " is interior but labeled leaf"));
    if (transfer_in_[v]) {
      if (tree_.is_root(v)) throw InputError(id + " is the root but marked as transfer edge");
      if (events_[tree_.parent(v)] != Event::transfer)
        throw InputError(id + " has a transfer edge from a non-transfer vertex");
    }
    if (tree_.is_leaf(v) && species_[v].empty())
      throw InputError(id + " is a leaf without species");
    if (!tree_.is_leaf(v) && !species_[v].empty())
      throw InputError(id + " is interior but has a species");
  }
}

VertexId SpeciesTree::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? kNoVertex : it->second;
}

SpeciesTree augment_species_tree(const RootedTree& raw) {
  if (raw.empty()) throw PreconditionError("species tree is empty");
  if (!raw.is_phylogenetic())
    throw PreconditionError("species tree has an interior vertex with one child");
  if (raw.child_count(raw.root()) == 1)
    throw PreconditionError("species tree root has a single child");
  const VertexId n = raw.size();
  std::vector<VertexId> parents(raw.parents().begin(), raw.parents().end());
  parents[raw.root()] = n;
  parents.push_back(kNoVertex);
  std::vector<std::string> labels(n + 1);
  for (VertexId v = 0; v < n; ++v) labels[v] = raw.label(v);

  SpeciesTree s;
  s.tree_ = RootedTree::from_parents(std::move(parents), std::move(labels));
  s.index_ = AncestorIndex(s.tree_);
  s.core_root_ = raw.root();
  for (VertexId v = 0; v < n; ++v) {
    if (!raw.is_leaf(v)) continue;
    if (raw.label(v).empty())
      throw PreconditionError("species leaf " + std::to_string(v) + " has no name");
    s.by_name_.emplace(raw.label(v), v);
  }
  return s;
}

TransferForest remove_transfer_edges(const GeneTree& g) {
  const RootedTree& t = g.tree();
  TransferForest f;
  f.component.assign(t.size(), -1);
  for (VertexId v = 0; v < t.size(); ++v)
    if (t.is_root(v) || g.transfer_in(v)) f.roots.push_back(v);
  for (std::size_t c = 0; c < f.roots.size(); ++c) f.component[f.roots[c]] = static_cast<int>(c);
  for (auto v : t.preorder())
    if (f.component[v] < 0) f.component[v] = f.component[t.parent(v)];
  return f;
}

Instance::Instance(GeneTree gene, SpeciesTree species)
    : gene_(std::move(gene)), species_(std::move(species)) {
  gene_index_ = AncestorIndex(gene_.tree());
  forest_ = remove_transfer_edges(gene_);
  sigma_.assign(gene_.size(), kNoVertex);
  for (VertexId v = 0; v < gene_.size(); ++v) {
    if (!gene_.tree().is_leaf(v)) continue;
    VertexId s = species_.find(gene_.species(v));
    if (s == kNoVertex) {
      std::string who = gene_.name(v).empty() ? std::to_string(v) : "'" + gene_.name(v) + "'";
      throw InputError("gene leaf " + who + " maps to unknown species '" +
                       gene_.species(v) + "'");
    }
    sigma_[v] = s;
  }
}

std::vector<VertexId> sigma_hat(const Instance& inst, VertexId v) {
  const RootedTree& t = inst.gene_tree();
  std::vector<VertexId> out;
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    VertexId x = stack.back();
    stack.pop_back();
    if (t.is_leaf(x)) out.push_back(inst.sigma(x));
    for (auto c : t.children(x))
      if (!inst.transfer_in(c)) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

using SpeciesSet = std::unordered_set<VertexId>;

bool disjoint(const SpeciesSet& a, const SpeciesSet& b) {
  const SpeciesSet& small = a.size() <= b.size() ? a : b;
  const SpeciesSet& large = a.size() <= b.size() ? b : a;
  for (auto s : small)
    if (large.count(s)) return false;
  return true;
}

}  // namespace

Report check_observability(const Instance& inst) {
  const RootedTree& t = inst.gene_tree();
  Report report;

  for (VertexId v = 0; v < t.size(); ++v) {
    if (t.is_leaf(v)) continue;
    if (t.child_count(v) < 2)
      report.add("O1", {v}, {},
                 t.is_root(v) ? "root has a single child" : "interior vertex has degree 2");
    if (inst.event(v) == Event::transfer) {
      bool any_transfer = false, any_vertical = false;
      for (auto c : t.children(v)) (inst.transfer_in(c) ? any_transfer : any_vertical) = true;
      if (!any_transfer) report.add("O2", {v}, {}, "transfer vertex without transfer edge");
      if (!any_vertical) report.add("O2", {v}, {}, "transfer vertex without non-transfer edge");
    }
  }

  // sigma_hat sets bottom-up, merging small into large so the whole pass
  // costs O(n log n) set operations.
  std::vector<std::unique_ptr<SpeciesSet>> sets(t.size());
  auto pre = t.preorder();
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    VertexId v = *it;
    auto kids = t.children(v);
    if (t.is_leaf(v)) {
      sets[v] = std::make_unique<SpeciesSet>();
      sets[v]->insert(inst.sigma(v));
      continue;
    }
    if (inst.event(v) == Event::speciation) {
      bool found = false;
      for (std::size_t i = 0; i < kids.size() && !found; ++i)
        for (std::size_t j = i + 1; j < kids.size() && !found; ++j)
          found = disjoint(*sets[kids[i]], *sets[kids[j]]);
      if (!found)
        report.add("Sigma1", {v}, {}, "no two children with disjoint species sets");
    }
    std::unique_ptr<SpeciesSet> acc;
    for (auto c : kids) {
      if (inst.transfer_in(c)) continue;
      if (!acc) {
        acc = std::move(sets[c]);
      } else {
        if (sets[c]->size() > acc->size()) std::swap(acc, sets[c]);
        acc->insert(sets[c]->begin(), sets[c]->end());
        sets[c].reset();
      }
    }
    if (!acc) acc = std::make_unique<SpeciesSet>();
    for (auto c : kids) {
      if (!inst.transfer_in(c)) continue;
      if (!disjoint(*acc, *sets[c]))
        report.add("Sigma2", {v, c}, {}, "transfer edge joins overlapping species sets");
      sets[c].reset();
    }
    sets[v] = std::move(acc);
  }
  report.sort();
  return report;
}

}  // namespace tcr
