#include "tcrecon/time_consistency.hpp"

#include "tcrecon/errors.hpp"

namespace tcr {

namespace {

// Affine rescaling of integer ranks with the gene root at 0 and the planted
// root at -1. It is strictly increasing, so all strict inequalities between
// ranks survive.
struct Normalizer {
  long long zero;
  long long unit;
  Time operator()(long long rank) const { return Time(rank - zero, unit); }
};

Normalizer normalizer(long long gene_root_rank, long long planted_rank) {
  if (gene_root_rank <= planted_rank)
    throw InvariantError("planted root is not ordered before the gene root");
  return {gene_root_rank, gene_root_rank - planted_rank};
}

std::vector<long long> ranks_of(const AuxGraph& g, const std::vector<int>& order) {
  std::vector<long long> rank(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<long long>(i);
  return rank;
}

TimeAssignment times_from_ranks(const Instance& inst, const std::vector<long long>& node_rank,
                                const std::vector<long long>& gene_rank) {
  const VertexId root_s = inst.species().planted_root();
  Normalizer norm = normalizer(gene_rank[inst.gene_tree().root()], node_rank[root_s]);
  TimeAssignment tau;
  tau.gene.reserve(inst.gene_size());
  tau.species.reserve(inst.species_size());
  for (VertexId u = 0; u < inst.gene_size(); ++u) tau.gene.push_back(norm(gene_rank[u]));
  for (VertexId x = 0; x < inst.species_size(); ++x) tau.species.push_back(norm(node_rank[x]));
  return tau;
}

void require_valid(const Instance& inst, const ReconciliationMap& mu) {
  Report r = validate_reconciliation(inst, mu);
  if (!r.empty()) throw InputError("not a valid reconciliation map:\n" + to_string(r));
}

void require_clean(const Report& r, const char* what) {
  if (!r.empty())
    throw InvariantError(std::string("constructed times fail ") + what + ":\n" + to_string(r));
}

}  // namespace

const char* to_string(ConstructStatus s) {
  switch (s) {
    case ConstructStatus::success: return "success";
    case ConstructStatus::no_reconciliation: return "no_reconciliation";
    case ConstructStatus::not_time_consistent: return "not_time_consistent";
  }
  return "?";
}

TcVerdict is_time_consistent(const Instance& inst, const ReconciliationMap& mu) {
  require_valid(inst, mu);
  AuxGraph g = build_aux_graph(inst, mu, AuxVariant::a1);
  TopoResult topo = topological_order(g);
  TcVerdict v;
  if (!topo.acyclic()) {
    v.witness = std::move(topo.cycle);
    return v;
  }
  auto rank = ranks_of(g, topo.order);
  std::vector<long long> gene_rank(inst.gene_size());
  for (VertexId u = 0; u < inst.gene_size(); ++u) gene_rank[u] = rank[g.gene_node[u]];
  TimeAssignment tau = times_from_ranks(inst, rank, gene_rank);
  require_clean(check_time_map(inst.gene_tree(), tau.gene, TreeSide::gene), "gene time map");
  require_clean(check_time_map(inst.species_tree(), tau.species, TreeSide::species),
                "species time map");
  require_clean(check_c(inst, mu, tau), "C1/C2");
  v.consistent = true;
  v.times = std::move(tau);
  return v;
}

TcVerdict exists_time_consistent(const Instance& inst, const ReconciliationMap& mu_any) {
  require_valid(inst, mu_any);
  AuxGraph g = build_aux_graph(inst, mu_any, AuxVariant::a2);
  TopoResult topo = topological_order(g);
  TcVerdict v;
  if (!topo.acyclic()) {
    v.witness = std::move(topo.cycle);
    return v;
  }
  auto rank = ranks_of(g, topo.order);
  std::vector<long long> gene_rank(inst.gene_size());
  for (VertexId u = 0; u < inst.gene_size(); ++u) gene_rank[u] = rank[g.gene_node[u]];
  TimeAssignment tau = times_from_ranks(inst, rank, gene_rank);
  require_clean(check_time_map(inst.gene_tree(), tau.gene, TreeSide::gene), "gene time map");
  require_clean(check_time_map(inst.species_tree(), tau.species, TreeSide::species),
                "species time map");
  require_clean(check_d(inst, mu_any, tau), "D1-D3");
  v.consistent = true;
  v.times = std::move(tau);
  return v;
}

ConstructResult construct_time_consistent(const Instance& inst) {
  const RootedTree& st = inst.species_tree();
  ConstructResult res;
  LcaSigmaMap ell = compute_lca_sigma(inst);
  res.map = build_initial_map(inst, ell);
  res.violations = validate_reconciliation(inst, res.map);
  if (!res.violations.empty()) {
    res.status = ConstructStatus::no_reconciliation;
    return res;
  }

  AuxGraph g = build_aux_graph(inst, res.map, AuxVariant::a2);
  TopoResult topo = topological_order(g);
  if (!topo.acyclic()) {
    res.status = ConstructStatus::not_time_consistent;
    res.witness = std::move(topo.cycle);
    return res;
  }
  auto rank = ranks_of(g, topo.order);
  std::vector<long long> gene_rank(inst.gene_size());
  for (VertexId u = 0; u < inst.gene_size(); ++u) gene_rank[u] = rank[g.gene_node[u]];

  // Raise each duplication/transfer until its rank falls strictly inside the
  // ranks of its image edge.
  for (VertexId u = 0; u < inst.gene_size(); ++u) {
    if (on_vertex(inst.event(u))) continue;
    VertexId y = ell[u];
    VertexId x = st.parent(y);
    while (rank[x] > gene_rank[u]) {
      y = x;
      x = st.parent(x);
      if (x == kNoVertex)
        throw InvariantError("no edge on the root path admits gene vertex " + std::to_string(u));
    }
    if (!(gene_rank[u] < rank[y]))
      throw InvariantError("gene vertex " + std::to_string(u) + " not above its image edge");
    res.map[u] = TreeElement::edge(x, y);
  }

  TimeAssignment tau = times_from_ranks(inst, rank, gene_rank);
  require_clean(validate_reconciliation(inst, res.map), "reconciliation axioms");
  require_clean(check_time_map(inst.gene_tree(), tau.gene, TreeSide::gene), "gene time map");
  require_clean(check_time_map(st, tau.species, TreeSide::species), "species time map");
  require_clean(check_c(inst, res.map, tau), "C1/C2");
  res.status = ConstructStatus::success;
  res.times = std::move(tau);
  return res;
}

}  // namespace tcr
