#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tcrecon/errors.hpp"
#include "tcrecon/oracle.hpp"

namespace tcr {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // Uniform in [0, 1), identical on every platform.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

struct DatedTree {
  std::vector<VertexId> parent;  // planted root is the last vertex
  std::vector<double> time;      // planted root at 0, increasing downward
  std::vector<std::vector<VertexId>> children;
  std::vector<std::string> name;
};

// Yule process; ids are assigned in preorder afterwards so the raw tree
// reads naturally.
DatedTree yule_tree(int n, Rng& rng) {
  struct Node {
    int parent = -1;
    double time = 0;
    std::vector<int> kids;
  };
  std::vector<Node> nodes(1);  // node 0: the first lineage, time filled later
  std::vector<int> alive{0};
  double t = 0;
  while (static_cast<int>(alive.size()) < n) {
    t += rng.exponential(static_cast<double>(alive.size()));
    std::size_t pick = rng.index(alive.size());
    int v = alive[pick];
    nodes[v].time = t;
    alive.erase(alive.begin() + static_cast<long>(pick));
    for (int k = 0; k < 2; ++k) {
      nodes.push_back({v, 0, {}});
      int c = static_cast<int>(nodes.size()) - 1;
      nodes[v].kids.push_back(c);
      alive.push_back(c);
    }
  }
  t += rng.exponential(static_cast<double>(alive.size()));
  for (int v : alive) nodes[v].time = t;
  if (n == 1) nodes[0].time = 1.0;

  DatedTree d;
  const int m = static_cast<int>(nodes.size());
  std::vector<int> id(m, -1);
  std::vector<int> order, stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    id[v] = static_cast<int>(order.size());
    order.push_back(v);
    for (auto it = nodes[v].kids.rbegin(); it != nodes[v].kids.rend(); ++it) stack.push_back(*it);
  }
  d.parent.assign(m + 1, kNoVertex);
  d.time.assign(m + 1, 0.0);
  d.children.assign(m + 1, {});
  d.name.assign(m + 1, "");
  int leaf_no = 0;
  for (int v : order) {
    int i = id[v];
    d.parent[i] = nodes[v].parent < 0 ? m : id[nodes[v].parent];
    d.time[i] = nodes[v].time;
    for (int c : nodes[v].kids) d.children[i].push_back(id[c]);
    if (nodes[v].kids.empty()) d.name[i] = "S" + std::to_string(++leaf_no);
  }
  d.children[m].push_back(0);
  return d;
}

enum class Kind { speciation, duplication, transfer, leaf, lost };

struct FullGene {
  std::vector<int> parent;
  std::vector<Kind> kind;
  std::vector<bool> transfer_in;
  std::vector<VertexId> species;  // for leaves
  std::vector<std::vector<int>> kids;
};

struct TooLarge {};

// Simulates one gene lineage entering the planted edge at time 0.
FullGene evolve(const DatedTree& s, const ScenarioParams& p, Rng& rng) {
  FullGene g;
  int leaves = 0;
  auto add = [&](int parent, Kind k, bool transfer) {
    if (static_cast<int>(g.parent.size()) >= p.max_vertices) throw TooLarge{};
    g.parent.push_back(parent);
    g.kind.push_back(k);
    g.transfer_in.push_back(transfer);
    g.species.push_back(kNoVertex);
    g.kids.emplace_back();
    int id = static_cast<int>(g.parent.size()) - 1;
    if (parent >= 0) g.kids[parent].push_back(id);
    return id;
  };
  const VertexId planted = static_cast<VertexId>(s.parent.size()) - 1;
  const VertexId n_species = planted;

  // Work item: lineage on edge (parent(y), y) from time t, hanging below
  // gene vertex `parent` (edge flagged as transfer if `transfer`). A lineage
  // that just entered its edge may duplicate or transfer once; the lineages
  // this leaves on the same edge can only be lost.
  struct Item {
    VertexId y;
    double t;
    int parent;
    bool transfer;
    bool entered;
  };
  std::vector<Item> work{{0, 0.0, -1, false, true}};
  while (!work.empty()) {
    Item it = work.back();
    work.pop_back();
    const double end = s.time[it.y];
    if (it.entered && rng.bernoulli(p.p_dup)) {
      double t = rng.uniform(it.t, end);
      int d = add(it.parent, Kind::duplication, it.transfer);
      work.push_back({it.y, t, d, false, false});
      work.push_back({it.y, t, d, false, false});
      continue;
    }
    if (it.entered && rng.bernoulli(p.p_hgt)) {
      double t = rng.uniform(it.t, end);
      std::vector<VertexId> cand;
      for (VertexId z = 0; z < n_species; ++z) {
        if (z == it.y) continue;
        double lo = s.time[s.parent[z]], hi = s.time[z];
        if (p.free_transfers) {
          bool comparable = false;
          for (VertexId a = z; a != kNoVertex; a = s.parent[a]) comparable |= a == it.y;
          for (VertexId a = it.y; a != kNoVertex; a = s.parent[a]) comparable |= a == z;
          if (!comparable) cand.push_back(z);
        } else if (lo < t && t < hi) {
          cand.push_back(z);
        }
      }
      if (!cand.empty()) {
        VertexId z = cand[rng.index(cand.size())];
        double tz = p.free_transfers ? rng.uniform(s.time[s.parent[z]], s.time[z]) : t;
        int h = add(it.parent, Kind::transfer, it.transfer);
        work.push_back({z, tz, h, true, true});
        work.push_back({it.y, t, h, false, false});
        continue;
      }
    }
    if (rng.bernoulli(p.p_loss)) {
      add(it.parent, Kind::lost, it.transfer);
      continue;
    }
    if (s.children[it.y].empty()) {
      // Surviving leaves only grow from here.
      if (++leaves > p.n_genes) throw TooLarge{};
      int l = add(it.parent, Kind::leaf, it.transfer);
      g.species[l] = it.y;
      continue;
    }
    int v = add(it.parent, Kind::speciation, it.transfer);
    const auto& ks = s.children[it.y];
    for (auto k = ks.rbegin(); k != ks.rend(); ++k) work.push_back({*k, end, v, false, true});
  }
  return g;
}

struct Pruned {
  std::vector<VertexId> parent;
  std::vector<Event> event;
  std::vector<bool> transfer_in;
  std::vector<VertexId> species;
  bool ok = true;
};

// Drops lost lineages and suppresses vertices left with one child. Returns
// ok=false if nothing survives or a transfer edge ends up leaving a vertex
// that is not a transfer.
Pruned prune(const FullGene& g) {
  const int n = static_cast<int>(g.parent.size());
  Pruned out;
  // Post-order: surviving representative of each subtree (-1 if extinct)
  // and whether the edge into that representative is a transfer.
  std::vector<int> rep(n, -1);
  std::vector<char> rep_transfer(n, 0);
  std::vector<std::vector<int>> kept(n);
  std::vector<int> order, stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : g.kids[v]) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (g.kind[v] == Kind::lost) continue;
    if (g.kind[v] == Kind::leaf) {
      rep[v] = v;
      rep_transfer[v] = g.transfer_in[v];
      continue;
    }
    for (int c : g.kids[v])
      if (rep[c] >= 0) kept[v].push_back(c);
    if (kept[v].empty()) continue;
    if (kept[v].size() == 1) {
      int c = kept[v][0];
      rep[v] = rep[c];
      rep_transfer[v] = g.transfer_in[v] || rep_transfer[c];
    } else {
      rep[v] = v;
      rep_transfer[v] = g.transfer_in[v];
    }
  }
  if (rep[0] < 0) {
    out.ok = false;
    return out;
  }

  // Rebuild in preorder over representatives.
  struct Todo {
    int v;
    VertexId parent;
    bool transfer;
  };
  std::vector<Todo> todo{{rep[0], kNoVertex, false}};
  while (!todo.empty()) {
    auto [v, parent, transfer] = todo.back();
    todo.pop_back();
    VertexId id = static_cast<VertexId>(out.parent.size());
    out.parent.push_back(parent);
    out.transfer_in.push_back(transfer);
    if (transfer && out.event[parent] != Event::transfer) out.ok = false;
    switch (g.kind[v]) {
      case Kind::leaf: out.event.push_back(Event::leaf); break;
      case Kind::speciation: out.event.push_back(Event::speciation); break;
      case Kind::duplication: out.event.push_back(Event::duplication); break;
      case Kind::transfer: out.event.push_back(Event::transfer); break;
      case Kind::lost: break;
    }
    out.species.push_back(g.species[v]);
    // rep_transfer[c] folds in the suppressed vertices between v and the
    // representative of c.
    for (auto k = kept[v].rbegin(); k != kept[v].rend(); ++k)
      todo.push_back({rep[*k], id, rep_transfer[*k] != 0});
  }
  return out;
}

}  // namespace

Instance random_scenario(const ScenarioParams& p) {
  auto prob = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (p.n_species < 1 || p.n_genes < 1 || !prob(p.p_dup) || !prob(p.p_hgt) || !prob(p.p_loss) ||
      p.max_attempts < 1)
    throw PreconditionError("scenario parameters out of range");

  Rng rng(p.seed);
  for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
    DatedTree s = yule_tree(p.n_species, rng);
    FullGene full;
    try {
      full = evolve(s, p, rng);
    } catch (const TooLarge&) {
      continue;
    }
    Pruned g = prune(full);
    if (!g.ok) continue;
    int leaves = 0;
    for (auto e : g.event) leaves += e == Event::leaf;
    if (leaves > p.n_genes) continue;

    std::vector<VertexId> raw_parent(s.parent.begin(), s.parent.end() - 1);
    raw_parent[0] = kNoVertex;
    std::vector<std::string> raw_names(s.name.begin(), s.name.end() - 1);
    SpeciesTree species =
        augment_species_tree(RootedTree::from_parents(std::move(raw_parent), raw_names));

    const auto n = static_cast<VertexId>(g.parent.size());
    std::vector<std::string> names(n), sp(n);
    for (VertexId v = 0; v < n; ++v)
      if (g.event[v] == Event::leaf) {
        names[v] = "g" + std::to_string(v);
        sp[v] = s.name[g.species[v]];
      }
    GeneTree gene(RootedTree::from_parents(std::move(g.parent), std::move(names)),
                  std::move(g.event), std::move(g.transfer_in), std::move(sp));
    Instance inst(std::move(gene), std::move(species));
    if (!check_observability(inst).empty()) continue;
    return inst;
  }
  throw Error("no admissible scenario after " + std::to_string(p.max_attempts) + " attempts");
}

}  // namespace tcr
