#include "tcrecon/oracle.hpp"

#include <algorithm>
#include <set>

#include "tcrecon/errors.hpp"

namespace tcr {

bool naive_is_ancestor(const RootedTree& t, VertexId u, VertexId v) {
  for (VertexId x = v; x != kNoVertex; x = t.parent(x))
    if (x == u) return true;
  return false;
}

VertexId naive_lca(const RootedTree& t, VertexId u, VertexId v) {
  std::set<VertexId> up;
  for (VertexId x = u; x != kNoVertex; x = t.parent(x)) up.insert(x);
  for (VertexId x = v; x != kNoVertex; x = t.parent(x))
    if (up.count(x)) return x;
  return kNoVertex;
}

std::vector<VertexId> naive_sigma_hat(const Instance& inst, VertexId v) {
  // A leaf belongs to sigma_hat(v) iff the path from it up to v uses no
  // transfer edge.
  const RootedTree& t = inst.gene_tree();
  std::set<VertexId> out;
  for (VertexId leaf = 0; leaf < t.size(); ++leaf) {
    if (!t.is_leaf(leaf)) continue;
    for (VertexId x = leaf;; x = t.parent(x)) {
      if (x == v) {
        out.insert(inst.sigma(leaf));
        break;
      }
      if (t.is_root(x) || inst.transfer_in(x)) break;
    }
  }
  return {out.begin(), out.end()};
}

LcaSigmaMap naive_lca_sigma(const Instance& inst) {
  LcaSigmaMap m;
  m.ell.assign(inst.gene_size(), kNoVertex);
  for (VertexId u = 0; u < inst.gene_size(); ++u) {
    auto hat = naive_sigma_hat(inst, u);
    if (hat.empty()) continue;
    VertexId acc = hat.front();
    for (auto s : hat) acc = naive_lca(inst.species_tree(), acc, s);
    m.ell[u] = acc;
  }
  return m;
}

std::vector<ReconciliationMap> enumerate_reconciliations(const Instance& inst, double cap) {
  const RootedTree& st = inst.species_tree();
  LcaSigmaMap ell = naive_lca_sigma(inst);
  const VertexId n = inst.gene_size();
  std::vector<std::vector<TreeElement>> choices(n);
  double total = 1;
  for (VertexId u = 0; u < n; ++u) {
    if (ell[u] == kNoVertex) return {};
    if (on_vertex(inst.event(u))) {
      choices[u].push_back(TreeElement::vertex(ell[u]));
    } else {
      for (VertexId y = ell[u]; !st.is_root(y); y = st.parent(y))
        choices[u].push_back(TreeElement::edge(st.parent(y), y));
    }
    total *= static_cast<double>(choices[u].size());
    if (total > cap)
      throw SizeCapError("candidate reconciliation count exceeds cap");
  }

  std::vector<ReconciliationMap> out;
  std::vector<std::size_t> digit(n, 0);
  ReconciliationMap mu;
  mu.image.resize(n);
  while (true) {
    for (VertexId u = 0; u < n; ++u) mu[u] = choices[u][digit[u]];
    if (validate_reconciliation(inst, mu).empty()) out.push_back(mu);
    VertexId i = n - 1;
    while (i >= 0 && ++digit[i] == choices[i].size()) digit[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

int merged_class_count(const Instance& inst) {
  int k = inst.species_size();
  for (VertexId u = 0; u < inst.gene_size(); ++u)
    if (!on_vertex(inst.event(u))) ++k;
  return k;
}

namespace {

struct Classes {
  int count = 0;
  std::vector<int> gene;     // class of each gene vertex
  std::vector<int> species;  // class of each species vertex
};

// False when an anchored vertex sits on an edge, so C1 cannot hold.
bool make_classes(const Instance& inst, const ReconciliationMap& mu, Classes& c) {
  c.species.resize(inst.species_size());
  for (VertexId x = 0; x < inst.species_size(); ++x) c.species[x] = c.count++;
  c.gene.resize(inst.gene_size());
  for (VertexId u = 0; u < inst.gene_size(); ++u) {
    if (on_vertex(inst.event(u))) {
      if (!mu[u].is_vertex()) return false;
      c.gene[u] = c.species[mu[u].upper];
    } else {
      c.gene[u] = c.count++;
    }
  }
  return true;
}

// (a, b): class a must be strictly earlier than class b. Read off the
// time-map definition on both trees (all ancestor pairs) and C2.
std::vector<std::pair<int, int>> precedences(const Instance& inst, const ReconciliationMap& mu,
                                             const Classes& c) {
  std::vector<std::pair<int, int>> out;
  const RootedTree& gt = inst.gene_tree();
  const RootedTree& st = inst.species_tree();
  for (VertexId x = 0; x < gt.size(); ++x)
    for (VertexId y = 0; y < gt.size(); ++y)
      if (x != y && naive_is_ancestor(gt, y, x)) out.emplace_back(c.gene[y], c.gene[x]);
  for (VertexId x = 0; x < st.size(); ++x)
    for (VertexId y = 0; y < st.size(); ++y)
      if (x != y && naive_is_ancestor(st, y, x)) out.emplace_back(c.species[y], c.species[x]);
  for (VertexId u = 0; u < gt.size(); ++u) {
    if (on_vertex(inst.event(u)) || !mu[u].is_edge()) continue;
    out.emplace_back(c.species[mu[u].upper], c.gene[u]);
    out.emplace_back(c.gene[u], c.species[mu[u].lower]);
  }
  return out;
}

// Direct reading of the definitions on concrete times.
bool literal_ok(const Instance& inst, const ReconciliationMap& mu,
                const std::vector<long long>& tg, const std::vector<long long>& ts) {
  const RootedTree& gt = inst.gene_tree();
  const RootedTree& st = inst.species_tree();
  for (VertexId x = 0; x < gt.size(); ++x)
    for (VertexId y = 0; y < gt.size(); ++y)
      if (x != y && naive_is_ancestor(gt, y, x) && !(tg[x] > tg[y])) return false;
  for (VertexId x = 0; x < st.size(); ++x)
    for (VertexId y = 0; y < st.size(); ++y)
      if (x != y && naive_is_ancestor(st, y, x) && !(ts[x] > ts[y])) return false;
  for (VertexId u = 0; u < gt.size(); ++u) {
    const TreeElement& m = mu[u];
    if (on_vertex(inst.event(u))) {
      if (!m.is_vertex() || tg[u] != ts[m.upper]) return false;
    } else {
      if (!m.is_edge() || !(ts[m.upper] < tg[u] && tg[u] < ts[m.lower])) return false;
    }
  }
  return true;
}

struct PermutationSearch {
  const Instance& inst;
  const ReconciliationMap& mu;
  const Classes& cls;
  std::vector<std::vector<int>> before;  // before[b] = classes that must precede b
  std::vector<int> position;
  int placed = 0;

  bool run() {
    if (placed == cls.count) {
      std::vector<long long> tg(inst.gene_size()), ts(inst.species_size());
      for (VertexId u = 0; u < inst.gene_size(); ++u) tg[u] = position[cls.gene[u]];
      for (VertexId x = 0; x < inst.species_size(); ++x) ts[x] = position[cls.species[x]];
      return literal_ok(inst, mu, tg, ts);
    }
    for (int c = 0; c < cls.count; ++c) {
      if (position[c] >= 0) continue;
      bool ready = std::all_of(before[c].begin(), before[c].end(),
                               [&](int p) { return position[p] >= 0; });
      if (!ready) continue;
      position[c] = placed++;
      if (run()) return true;
      position[c] = -1;
      --placed;
    }
    return false;
  }
};

}  // namespace

bool oracle_time_consistent(const Instance& inst, const ReconciliationMap& mu, OracleMode mode) {
  if (mu.size() != inst.gene_size()) throw InputError("reconciliation map is not total");
  const int k = merged_class_count(inst);
  if (mode == OracleMode::automatic)
    mode = k <= 9 ? OracleMode::permutation : OracleMode::closure;
  if (mode == OracleMode::permutation && k > 9)
    throw SizeCapError("permutation oracle is limited to 9 classes");
  if (mode == OracleMode::closure && k > 60)
    throw SizeCapError("closure oracle is limited to 60 classes");

  Classes cls;
  if (!make_classes(inst, mu, cls)) return false;
  auto prec = precedences(inst, mu, cls);
  for (auto [a, b] : prec)
    if (a == b) return false;

  if (mode == OracleMode::closure) {
    std::vector<std::vector<char>> reach(cls.count, std::vector<char>(cls.count, 0));
    for (auto [a, b] : prec) reach[a][b] = 1;
    for (int m = 0; m < cls.count; ++m)
      for (int a = 0; a < cls.count; ++a)
        if (reach[a][m])
          for (int b = 0; b < cls.count; ++b)
            if (reach[m][b]) reach[a][b] = 1;
    for (int a = 0; a < cls.count; ++a)
      if (reach[a][a]) return false;
    return true;
  }

  PermutationSearch search{inst, mu, cls, std::vector<std::vector<int>>(cls.count),
                           std::vector<int>(cls.count, -1)};
  for (auto [a, b] : prec) search.before[b].push_back(a);
  return search.run();
}

bool oracle_exists_tc(const Instance& inst, OracleMode mode, double cap) {
  for (const auto& mu : enumerate_reconciliations(inst, cap))
    if (oracle_time_consistent(inst, mu, mode)) return true;
  return false;
}

}  // namespace tcr
