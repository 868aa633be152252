#include "tcrecon/reconciliation.hpp"

#include <string>

#include "tcrecon/errors.hpp"

namespace tcr {

namespace {

// ell with kNoVertex where a component subtree has no leaves.
std::vector<VertexId> lca_sigma_partial(const Instance& inst) {
  const RootedTree& t = inst.gene_tree();
  const AncestorIndex& s = inst.species_index();
  std::vector<VertexId> ell(t.size(), kNoVertex);
  // Explicit stack: (vertex, children expanded yet?).
  std::vector<std::pair<VertexId, bool>> stack{{t.root(), false}};
  while (!stack.empty()) {
    auto [u, expanded] = stack.back();
    stack.pop_back();
    if (t.is_leaf(u)) {
      ell[u] = inst.sigma(u);
      continue;
    }
    if (!expanded) {
      stack.emplace_back(u, true);
      auto kids = t.children(u);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, false);
      continue;
    }
    VertexId acc = kNoVertex;
    for (auto c : t.children(u)) {
      if (inst.transfer_in(c) || ell[c] == kNoVertex) continue;
      acc = acc == kNoVertex ? ell[c] : s.lca(acc, ell[c]);
    }
    ell[u] = acc;
  }
  return ell;
}

TreeElement edge_above(const Instance& inst, VertexId x) {
  return TreeElement::edge(inst.species_tree().parent(x), x);
}

std::string gname(VertexId v) { return "gene vertex " + std::to_string(v); }

}  // namespace

LcaSigmaMap compute_lca_sigma(const Instance& inst) {
  LcaSigmaMap m{lca_sigma_partial(inst)};
  for (VertexId v = 0; v < inst.gene_size(); ++v)
    if (m.ell[v] == kNoVertex)
      throw PreconditionError(gname(v) + " has no leaf in its transfer-free subtree");
  return m;
}

ReconciliationMap build_initial_map(const Instance& inst, const LcaSigmaMap& ell) {
  ReconciliationMap mu;
  mu.image.resize(inst.gene_size());
  for (VertexId u = 0; u < inst.gene_size(); ++u)
    mu[u] = on_vertex(inst.event(u)) ? TreeElement::vertex(ell[u]) : edge_above(inst, ell[u]);
  return mu;
}

ReconciliationMap build_initial_map(const Instance& inst) {
  return build_initial_map(inst, compute_lca_sigma(inst));
}

Report validate_reconciliation(const Instance& inst, const ReconciliationMap& mu) {
  const RootedTree& t = inst.gene_tree();
  const AncestorIndex& s = inst.species_index();
  if (mu.size() != t.size())
    throw InputError("reconciliation map covers " + std::to_string(mu.size()) +
                     " of " + std::to_string(t.size()) + " gene vertices");
  for (VertexId u = 0; u < t.size(); ++u)
    if (!s.valid(mu[u]))
      throw InputError("reconciliation image of " + gname(u) +
                       " is not a species vertex or edge");

  auto ell = lca_sigma_partial(inst);
  Report r;
  for (VertexId u = 0; u < t.size(); ++u) {
    const TreeElement& m = mu[u];
    switch (inst.event(u)) {
      case Event::leaf:
        if (m != TreeElement::vertex(inst.sigma(u)))
          r.add("M1", {u}, {inst.sigma(u)}, "leaf not mapped to its species");
        break;
      case Event::speciation:
        if (ell[u] == kNoVertex)
          r.add("M2i", {u}, {}, "speciation has no leaf in its component");
        else if (m != TreeElement::vertex(ell[u]))
          r.add("M2i", {u}, {ell[u]}, "speciation not mapped to lca of its species");
        break;
      case Event::duplication:
      case Event::transfer:
        if (!m.is_edge()) r.add("M2ii", {u}, {m.upper}, "event mapped to a vertex, not an edge");
        break;
    }
    if (ell[u] != kNoVertex && !s.precedes_or_equal(TreeElement::vertex(ell[u]), m))
      r.add("LB", {u}, {ell[u]}, "image lies below lca of its species");

    if (t.is_root(u)) continue;
    VertexId p = t.parent(u);
    if (inst.transfer_in(u)) {
      if (s.compare(mu[p], m) != Relation::incomparable)
        r.add("M2iii", {p, u}, {}, "transfer edge endpoints map to comparable elements");
      continue;
    }
    // Checking consecutive parent-child pairs suffices: the order is
    // transitive and a strict step anywhere makes the composite strict.
    bool strict = on_vertex(inst.event(u)) || on_vertex(inst.event(p));
    Relation rel = s.compare(m, mu[p]);
    if (strict) {
      if (rel != Relation::descendant)
        r.add("M3ii", {u, p}, {}, "child image not strictly below parent image");
    } else if (rel != Relation::descendant && rel != Relation::equal) {
      r.add("M3i", {u, p}, {}, "child image not below parent image");
    }
  }
  r.sort();
  return r;
}

void require_binary(const Instance& inst) {
  if (!inst.gene_tree().is_binary())
    throw UnsupportedShape("gene tree is not binary");
  const RootedTree& s = inst.species_tree();
  for (VertexId v = 0; v < s.size(); ++v)
    if (v != s.root() && !s.is_leaf(v) && s.child_count(v) != 2)
      throw UnsupportedShape("species tree is not binary");
}

DtlMap to_dtl(const Instance& inst, const ReconciliationMap& mu) {
  require_binary(inst);
  Report r = validate_reconciliation(inst, mu);
  if (!r.empty())
    throw PreconditionError("not a valid reconciliation map:\n" + to_string(r));
  DtlMap g;
  g.gamma.resize(inst.gene_size());
  for (VertexId u = 0; u < inst.gene_size(); ++u) g[u] = mu[u].lower;
  return g;
}

ReconciliationMap from_dtl(const Instance& inst, const DtlMap& gamma) {
  require_binary(inst);
  Report r = validate_dtl(inst, gamma);
  if (!r.empty()) throw PreconditionError("not a valid DTL map:\n" + to_string(r));
  ReconciliationMap mu;
  mu.image.resize(inst.gene_size());
  for (VertexId u = 0; u < inst.gene_size(); ++u) {
    if (on_vertex(inst.event(u))) {
      mu[u] = TreeElement::vertex(gamma[u]);
    } else {
      if (gamma[u] == inst.species().planted_root())
        throw PreconditionError("DTL image of " + gname(u) + " has no edge above it");
      mu[u] = edge_above(inst, gamma[u]);
    }
  }
  return mu;
}

Report validate_dtl(const Instance& inst, const DtlMap& gamma) {
  require_binary(inst);
  const RootedTree& t = inst.gene_tree();
  const AncestorIndex& s = inst.species_index();
  if (static_cast<VertexId>(gamma.gamma.size()) != t.size())
    throw InputError("DTL map does not cover every gene vertex");
  for (VertexId u = 0; u < t.size(); ++u)
    if (gamma[u] < 0 || gamma[u] >= inst.species_size())
      throw InputError("DTL image of " + gname(u) + " is not a species vertex");

  Report r;
  for (VertexId u = 0; u < t.size(); ++u) {
    VertexId gu = gamma[u];
    if (t.is_leaf(u)) {
      if (gu != inst.sigma(u)) r.add("I", {u}, {inst.sigma(u)}, "leaf not mapped to its species");
      continue;
    }
    VertexId v = t.children(u)[0], w = t.children(u)[1];
    VertexId gv = gamma[v], gw = gamma[w];
    if ((s.is_ancestor(gv, gu) && gv != gu) || (s.is_ancestor(gw, gu) && gw != gu))
      r.add("IIa", {u}, {gu}, "image is a proper descendant of a child image");
    if (!s.is_ancestor(gu, gv) && !s.is_ancestor(gu, gw))
      r.add("IIb", {u}, {gu}, "neither child image lies below the image");
    for (VertexId c : {v, w}) {
      bool incomparable = !s.comparable(gu, gamma[c]);
      if (incomparable != inst.transfer_in(c))
        r.add("III", {u, c}, {gu, gamma[c]},
              incomparable ? "incomparable images on a non-transfer edge"
                           : "comparable images on a transfer edge");
    }
    bool has_transfer = inst.transfer_in(v) || inst.transfer_in(w);
    if ((inst.event(u) == Event::transfer) != has_transfer)
      r.add("IVa", {u}, {}, "transfer label does not match transfer edges");
    if (inst.event(u) == Event::speciation &&
        (gu != s.lca(gv, gw) || s.comparable(gv, gw)))
      r.add("IVb", {u}, {gu}, "speciation image is not lca of incomparable child images");
    if (inst.event(u) == Event::duplication && !s.is_ancestor(gu, s.lca(gv, gw)))
      r.add("IVc", {u}, {gu}, "duplication image below lca of child images");
  }
  r.sort();
  return r;
}

}  // namespace tcr
