#include "tcrecon/aux_graph.hpp"

#include <algorithm>
#include <queue>

#include "tcrecon/errors.hpp"

namespace tcr {

AuxGraph::AuxGraph(std::vector<AuxNode> nodes, std::vector<AuxEdge> edges, int seed)
    : nodes_(std::move(nodes)), seed_(seed) {
  const int n = size();
  std::sort(edges.begin(), edges.end(), [](const AuxEdge& a, const AuxEdge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw InvariantError("auxiliary edge endpoint out of range");
    if (!edges_.empty() && edges_.back().from == e.from && edges_.back().to == e.to)
      edges_.back().rules |= e.rules;
    else
      edges_.push_back(e);
  }
  out_offset_.assign(n + 1, 0);
  in_offset_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++out_offset_[e.from + 1];
    ++in_offset_[e.to + 1];
  }
  for (int i = 0; i < n; ++i) {
    out_offset_[i + 1] += out_offset_[i];
    in_offset_[i + 1] += in_offset_[i];
  }
  out_list_.resize(edges_.size());
  in_list_.resize(edges_.size());
  std::vector<int> of(out_offset_.begin(), out_offset_.end() - 1);
  std::vector<int> inf(in_offset_.begin(), in_offset_.end() - 1);
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    out_list_[of[edges_[i].from]++] = i;
    in_list_[inf[edges_[i].to]++] = i;
  }
}

AuxGraph build_aux_graph(const Instance& inst, const ReconciliationMap& mu, AuxVariant variant) {
  const RootedTree& gt = inst.gene_tree();
  const RootedTree& st = inst.species_tree();
  const AncestorIndex& si = inst.species_index();
  if (mu.size() != gt.size()) throw InputError("reconciliation map is not total");
  LcaSigmaMap ell = compute_lca_sigma(inst);

  std::vector<AuxNode> nodes;
  nodes.reserve(st.size() + gt.size());
  for (VertexId x = 0; x < st.size(); ++x) nodes.push_back({AuxNode::Kind::species, x});
  std::vector<int> gene_node(gt.size());
  for (VertexId u = 0; u < gt.size(); ++u) {
    const TreeElement& m = mu[u];
    if (!si.valid(m)) throw InputError("reconciliation image of gene vertex " +
                                       std::to_string(u) + " is not in the species tree");
    if (on_vertex(inst.event(u))) {
      if (!m.is_vertex())
        throw InputError("gene vertex " + std::to_string(u) + " is anchored but mapped to an edge");
      gene_node[u] = m.upper;
    } else {
      if (!m.is_edge())
        throw InputError("gene vertex " + std::to_string(u) + " is an event mapped to a vertex");
      gene_node[u] = static_cast<int>(nodes.size());
      nodes.push_back({AuxNode::Kind::gene, u});
    }
  }

  std::vector<AuxEdge> edges;
  for (VertexId v = 0; v < gt.size(); ++v)
    if (!gt.is_root(v)) edges.push_back({gene_node[gt.parent(v)], gene_node[v], kRuleA1});
  for (VertexId x = 0; x < st.size(); ++x)
    if (!st.is_root(x)) edges.push_back({st.parent(x), x, kRuleA2});
  for (VertexId u = 0; u < gt.size(); ++u) {
    if (on_vertex(inst.event(u))) continue;
    if (variant == AuxVariant::a2) {
      edges.push_back({gene_node[u], ell[u], kRuleA3});
    } else {
      edges.push_back({mu[u].upper, gene_node[u], kRuleA5});
      edges.push_back({gene_node[u], mu[u].lower, kRuleA5});
    }
  }
  if (variant == AuxVariant::a2)
    for (VertexId v = 0; v < gt.size(); ++v) {
      if (!inst.transfer_in(v)) continue;
      VertexId u = gt.parent(v);
      edges.push_back({si.lca(ell[u], ell[v]), gene_node[u], kRuleA4});
    }

  AuxGraph g(std::move(nodes), std::move(edges), st.root());
  g.gene_node = std::move(gene_node);
  return g;
}

namespace {

CycleWitness make_witness(const AuxGraph& g, std::vector<int> cycle) {
  // cycle is closed (front == back); rotate so the smallest id leads.
  cycle.pop_back();
  std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
  cycle.push_back(cycle.front());
  CycleWitness w;
  w.ids = cycle;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    w.nodes.push_back(g.node(cycle[i]));
    if (i + 1 == cycle.size()) break;
    for (int e : g.out_edges(cycle[i]))
      if (g.edges()[e].to == cycle[i + 1]) w.rules.push_back(g.edges()[e].rules);
  }
  return w;
}

}  // namespace

TopoResult topological_order(const AuxGraph& g) {
  const int n = g.size();
  TopoResult result;
  for (const auto& e : g.edges())
    if (e.from == e.to) {
      result.cycle = make_witness(g, {e.from, e.from});
      return result;
    }

  std::vector<int> indeg(n);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(g.in_edges(v).size());
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  auto release = [&](int v) {
    result.order.push_back(v);
    for (int e : g.out_edges(v))
      if (--indeg[g.edges()[e].to] == 0) ready.push(g.edges()[e].to);
  };
  bool seeded = g.seed() >= 0 && indeg[g.seed()] == 0;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0 && !(seeded && v == g.seed())) ready.push(v);
  if (seeded) release(g.seed());
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    release(v);
  }
  if (static_cast<int>(result.order.size()) == n) return result;

  // Every residual vertex keeps a residual predecessor, so walking backward
  // must revisit a vertex.
  std::vector<char> residual(n, 1);
  for (int v : result.order) residual[v] = 0;
  int start = 0;
  while (!residual[start]) ++start;
  std::vector<int> pos(n, -1), path;
  int v = start;
  while (pos[v] < 0) {
    pos[v] = static_cast<int>(path.size());
    path.push_back(v);
    int pred = -1;
    for (int e : g.in_edges(v)) {
      int from = g.edges()[e].from;
      if (residual[from] && (pred < 0 || from < pred)) pred = from;
    }
    if (pred < 0) throw InvariantError("residual vertex without residual predecessor");
    v = pred;
  }
  std::vector<int> cycle(path.begin() + pos[v], path.end());
  cycle.push_back(v);
  std::reverse(cycle.begin(), cycle.end());
  result.cycle = make_witness(g, std::move(cycle));
  result.order.clear();
  return result;
}

std::string rules_to_string(std::uint8_t rules) {
  std::string out;
  for (int i = 0; i < 5; ++i)
    if (rules & (1u << i)) {
      if (!out.empty()) out += '+';
      out += "A" + std::to_string(i + 1);
    }
  return out;
}

}  // namespace tcr
