#pragma once

#include <vector>

#include "tcrecon/ancestor_index.hpp"
#include "tcrecon/report.hpp"
#include "tcrecon/scenario.hpp"

namespace tcr {

// Gene vertex -> species vertex or edge.
struct ReconciliationMap {
  std::vector<TreeElement> image;

  const TreeElement& operator[](VertexId v) const { return image[v]; }
  TreeElement& operator[](VertexId v) { return image[v]; }
  VertexId size() const { return static_cast<VertexId>(image.size()); }
  friend bool operator==(const ReconciliationMap&, const ReconciliationMap&) = default;
};

// ell[u] = lca of the species below u within its transfer-free component.
struct LcaSigmaMap {
  std::vector<VertexId> ell;

  VertexId operator[](VertexId v) const { return ell[v]; }
  friend bool operator==(const LcaSigmaMap&, const LcaSigmaMap&) = default;
};

// Vertex-only map of the DTL formulation.
struct DtlMap {
  std::vector<VertexId> gamma;

  VertexId operator[](VertexId v) const { return gamma[v]; }
  VertexId& operator[](VertexId v) { return gamma[v]; }
  friend bool operator==(const DtlMap&, const DtlMap&) = default;
};

// Single bottom-up pass folding lca over non-transfer children. Throws
// PreconditionError if some vertex has no leaf in its component (which needs
// an O2 violation).
LcaSigmaMap compute_lca_sigma(const Instance& inst);

// Lowest placement: anchored vertices on ell(u), the rest on the edge above.
ReconciliationMap build_initial_map(const Instance& inst, const LcaSigmaMap& ell);
ReconciliationMap build_initial_map(const Instance& inst);

// Conditions M1, M2i, M2ii, M2iii, M3i, M3ii plus the derived lower bound
// "LB" (mu(u) above ell(u)). Throws InputError if mu is not total or names
// something that is not a vertex or edge of the species tree.
Report validate_reconciliation(const Instance& inst, const ReconciliationMap& mu);

// Throws UnsupportedShape unless both the gene tree and the species tree
// (without its planted root) are binary.
void require_binary(const Instance& inst);

// Throws PreconditionError if mu is not a valid reconciliation.
DtlMap to_dtl(const Instance& inst, const ReconciliationMap& mu);
// Throws PreconditionError if gamma violates the DTL axioms, or if it would
// need an edge above the planted root.
ReconciliationMap from_dtl(const Instance& inst, const DtlMap& gamma);

// Conditions I, IIa, IIb, III, IVa, IVb, IVc.
Report validate_dtl(const Instance& inst, const DtlMap& gamma);

}  // namespace tcr
