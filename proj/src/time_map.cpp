#include "tcrecon/time_map.hpp"

#include <charconv>
#include <map>
#include <optional>

#include "tcrecon/errors.hpp"

namespace tcr {

namespace {

using MaybeTime = std::optional<Time>;

void take_min(MaybeTime& acc, const Time& t) {
  if (!acc || t < *acc) acc = t;
}
void take_max(MaybeTime& acc, const Time& t) {
  if (!acc || t > *acc) acc = t;
}

// Minimum of own values over each subtree (inclusive).
std::vector<MaybeTime> subtree_min(const RootedTree& t, std::vector<MaybeTime> own) {
  auto pre = t.preorder();
  for (auto it = pre.rbegin(); it != pre.rend(); ++it)
    if (!t.is_root(*it) && own[*it]) take_min(own[t.parent(*it)], *own[*it]);
  return own;
}

// Maximum of own values over each root path (inclusive).
std::vector<MaybeTime> ancestor_max(const RootedTree& t, std::vector<MaybeTime> own) {
  for (auto v : t.preorder())
    if (!t.is_root(v) && own[t.parent(v)]) take_max(own[v], *own[t.parent(v)]);
  return own;
}

VertexId transfer_lca(const Instance& inst, const LcaSigmaMap& ell, VertexId u, VertexId v) {
  return inst.species_index().lca(ell[u], ell[v]);
}

// Species vertices in the subtree of x, preorder.
std::vector<VertexId> subtree(const Instance& inst, VertexId x) {
  const AncestorIndex& s = inst.species_index();
  std::vector<VertexId> out;
  for (int i = s.entry(x); i < s.exit(x); ++i) out.push_back(s.at_entry(i));
  return out;
}

void check_sizes(const Instance& inst, std::size_t gene, std::size_t species) {
  if (gene != static_cast<std::size_t>(inst.gene_size()) ||
      species != static_cast<std::size_t>(inst.species_size()))
    throw InputError("time assignment does not cover every vertex");
}

}  // namespace

std::string format_time(const Time& t) {
  return numerator(t).str() + "/" + denominator(t).str();
}

Time parse_time(std::string_view s) {
  auto bad = [&] { return InputError("malformed time '" + std::string(s) + "'"); };
  auto is_int = [](std::string_view x) {
    if (!x.empty() && x[0] == '-') x.remove_prefix(1);
    if (x.empty()) return false;
    for (char c : x)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : s.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den[0] == '-') throw bad();
  boost::multiprecision::cpp_int p(std::string{num}), q(std::string{den});
  if (q == 0) throw bad();
  return Time(p, q);
}

Report check_time_map(const RootedTree& tree, std::span<const Time> tau, TreeSide side) {
  if (tau.size() != static_cast<std::size_t>(tree.size()))
    throw InputError("time map does not cover every vertex");
  Report r;
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (tree.is_root(v)) continue;
    VertexId p = tree.parent(v);
    if (tau[v] > tau[p]) continue;
    std::vector<VertexId> pair{v, p};
    if (side == TreeSide::gene)
      r.add("time_map", pair, {}, "child not later than parent");
    else
      r.add("time_map", {}, pair, "child not later than parent");
  }
  return r;
}

Report check_c(const Instance& inst, const ReconciliationMap& mu, const TimeAssignment& tau) {
  check_sizes(inst, tau.gene.size(), tau.species.size());
  Report r;
  for (VertexId u = 0; u < inst.gene_size(); ++u) {
    const TreeElement& m = mu[u];
    if (on_vertex(inst.event(u))) {
      if (!m.is_vertex())
        throw InputError("gene vertex " + std::to_string(u) + " is anchored but mapped to an edge");
      if (tau.gene[u] != tau.species[m.upper])
        r.add("C1", {u}, {m.upper}, "time differs from image vertex");
    } else {
      if (!m.is_edge())
        throw InputError("gene vertex " + std::to_string(u) + " is an event mapped to a vertex");
      if (!(tau.species[m.upper] < tau.gene[u] && tau.gene[u] < tau.species[m.lower]))
        r.add("C2", {u}, {m.upper, m.lower}, "time not strictly inside image edge");
    }
  }
  return r;
}

Report check_d(const Instance& inst, const ReconciliationMap& mu, const TimeAssignment& tau) {
  check_sizes(inst, tau.gene.size(), tau.species.size());
  const RootedTree& st = inst.species_tree();
  const RootedTree& gt = inst.gene_tree();
  LcaSigmaMap ell = compute_lca_sigma(inst);
  Report r;

  for (VertexId u = 0; u < gt.size(); ++u)
    if (mu[u].is_vertex() && tau.gene[u] != tau.species[mu[u].upper])
      r.add("D1", {u}, {mu[u].upper}, "time differs from image vertex");

  std::vector<MaybeTime> own(st.size());
  for (VertexId x = 0; x < st.size(); ++x) own[x] = tau.species[x];
  auto low = subtree_min(st, own);
  auto high = ancestor_max(st, own);

  for (VertexId u = 0; u < gt.size(); ++u) {
    if (on_vertex(inst.event(u))) continue;
    if (*low[ell[u]] > tau.gene[u]) continue;
    for (auto x : subtree(inst, ell[u]))
      if (!(tau.species[x] > tau.gene[u]))
        r.add("D2", {u}, {x}, "species below lca not later than event");
  }
  for (VertexId v = 0; v < gt.size(); ++v) {
    if (!inst.transfer_in(v)) continue;
    VertexId u = gt.parent(v);
    VertexId z = transfer_lca(inst, ell, u, v);
    if (tau.gene[u] > *high[z]) continue;
    for (VertexId x = z; x != kNoVertex; x = st.parent(x))
      if (!(tau.gene[u] > tau.species[x]))
        r.add("D3", {u, v}, {x}, "species above transfer lca not earlier than transfer");
  }
  r.sort();
  return r;
}

Report check_t(const Instance& inst, const ReconciliationMap& mu, std::span<const Time> tg) {
  const RootedTree& st = inst.species_tree();
  const RootedTree& gt = inst.gene_tree();
  if (tg.size() != static_cast<std::size_t>(gt.size()))
    throw InputError("gene time map does not cover every vertex");
  LcaSigmaMap ell = compute_lca_sigma(inst);
  Report r;

  // Anchored preimages per species vertex, in gene-id order.
  std::vector<std::vector<VertexId>> pre(st.size());
  for (VertexId u = 0; u < gt.size(); ++u)
    if (on_vertex(inst.event(u))) {
      if (!mu[u].is_vertex())
        throw InputError("gene vertex " + std::to_string(u) + " is anchored but mapped to an edge");
      pre[mu[u].upper].push_back(u);
    }

  std::vector<MaybeTime> min_at(st.size()), max_at(st.size());
  for (VertexId x = 0; x < st.size(); ++x)
    for (auto u : pre[x]) {
      take_min(min_at[x], tg[u]);
      take_max(max_at[x], tg[u]);
      if (tg[u] != tg[pre[x].front()])
        r.add("T1a", {pre[x].front(), u}, {x}, "same image, different times");
    }

  // T1b: every anchored vertex must be later than all anchored vertices at
  // proper ancestors of its image.
  auto above = ancestor_max(st, max_at);
  for (VertexId x = 0; x < st.size(); ++x) {
    if (pre[x].empty() || st.is_root(x)) continue;
    const MaybeTime& bound = above[st.parent(x)];
    if (!bound || *min_at[x] > *bound) continue;
    for (auto u : pre[x])
      for (VertexId y = st.parent(x); y != kNoVertex; y = st.parent(y))
        for (auto v : pre[y])
          if (!(tg[u] > tg[v]))
            r.add("T1b", {u, v}, {x, y}, "image below but not later");
  }

  // T2: anchored vertices in the subtree of ell(v) are later than v.
  auto below = subtree_min(st, min_at);
  for (VertexId v = 0; v < gt.size(); ++v) {
    if (on_vertex(inst.event(v))) continue;
    const MaybeTime& bound = below[ell[v]];
    if (!bound || *bound > tg[v]) continue;
    for (auto x : subtree(inst, ell[v]))
      for (auto u : pre[x])
        if (!(tg[u] > tg[v])) r.add("T2", {u, v}, {x}, "anchored vertex not later than event");
  }

  // T3: a transfer is later than every w whose ell lies above the transfer lca.
  std::vector<MaybeTime> w_max(st.size());
  std::vector<std::vector<VertexId>> by_ell(st.size());
  for (VertexId w = 0; w < gt.size(); ++w) {
    take_max(w_max[ell[w]], tg[w]);
    by_ell[ell[w]].push_back(w);
  }
  auto path_max = ancestor_max(st, w_max);
  for (VertexId v = 0; v < gt.size(); ++v) {
    if (!inst.transfer_in(v)) continue;
    VertexId u = gt.parent(v);
    VertexId z = transfer_lca(inst, ell, u, v);
    if (!path_max[z] || tg[u] > *path_max[z]) continue;
    for (VertexId y = z; y != kNoVertex; y = st.parent(y))
      for (auto w : by_ell[y])
        if (!(tg[u] > tg[w])) r.add("T3", {u, v, w}, {z}, "transfer not later than w");
  }
  r.sort();
  return r;
}

std::vector<Time> extend_time_map(const Instance& inst, const ReconciliationMap& mu,
                                  std::span<const Time> tg) {
  const RootedTree& st = inst.species_tree();
  const RootedTree& gt = inst.gene_tree();
  {
    Report pre = check_time_map(gt, tg, TreeSide::gene);
    pre.append(check_t(inst, mu, tg));
    if (!pre.empty())
      throw PreconditionError("gene times violate the time-map or T conditions:\n" + to_string(pre));
  }
  LcaSigmaMap ell = compute_lca_sigma(inst);

  std::vector<MaybeTime> tau(st.size());
  for (VertexId u = 0; u < gt.size(); ++u)
    if (on_vertex(inst.event(u))) tau[mu[u].upper] = tg[u];
  if (tau[st.root()])
    throw PreconditionError("planted root has a preimage");
  tau[st.root()] = std::min(Time(-1), tg[gt.root()] - 1);

  // lo: events whose ell lies at or above x; up: transfers whose lca lies at
  // or below x.
  std::vector<MaybeTime> lo(st.size()), up(st.size());
  for (VertexId u = 0; u < gt.size(); ++u)
    if (!on_vertex(inst.event(u))) take_max(lo[ell[u]], tg[u]);
  for (VertexId v = 0; v < gt.size(); ++v)
    if (inst.transfer_in(v)) {
      VertexId u = gt.parent(v);
      take_min(up[transfer_lca(inst, ell, u, v)], tg[u]);
    }
  lo = ancestor_max(st, std::move(lo));
  up = subtree_min(st, std::move(up));

  // UP: anchored values strictly below x. Only anchored descendants carry a
  // value when x is visited, because the sweep goes root-first.
  std::vector<MaybeTime> anchored_below(st.size());
  for (VertexId x = 0; x < st.size(); ++x)
    if (!st.is_root(x) && tau[x]) anchored_below[x] = tau[x];
  anchored_below = subtree_min(st, std::move(anchored_below));

  std::vector<MaybeTime> strict_below(st.size());
  for (VertexId x = 0; x < st.size(); ++x)
    for (auto c : st.children(x))
      if (anchored_below[c]) take_min(strict_below[x], *anchored_below[c]);

  for (auto x : st.preorder()) {
    if (tau[x]) continue;
    MaybeTime lower = tau[st.parent(x)];  // parents are final and increase downward
    if (lo[x]) take_max(lower, *lo[x]);
    MaybeTime upper = strict_below[x];
    if (up[x]) take_min(upper, *up[x]);
    if (!upper) {
      tau[x] = *lower + 1;
    } else if (*lower < *upper) {
      tau[x] = (*lower + *upper) / 2;
    } else {
      throw PreconditionError("no admissible time for species vertex " + std::to_string(x));
    }
  }
  std::vector<Time> out(st.size());
  for (VertexId x = 0; x < st.size(); ++x) out[x] = *tau[x];
  return out;
}

}  // namespace tcr
