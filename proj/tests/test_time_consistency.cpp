#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "helpers.hpp"
#include "tcrecon/aux_graph.hpp"
#include "tcrecon/errors.hpp"
#include "tcrecon/oracle.hpp"
#include "tcrecon/reconciliation.hpp"
#include "tcrecon/time_consistency.hpp"
#include "tcrecon/time_map.hpp"

using namespace tcr;
using tcr::testing::fixture;
using tcr::testing::from_newick;
using tcr::testing::gene;
using tcr::testing::species;

namespace {

const char* kFourLeaves = "((A,B)p1,(C,D)p2)r;";
const std::map<std::string, std::string> kCrossSigma{{"c1", "C"}, {"a1", "A"}, {"b1", "B"}, {"a2", "A"},
                                                     {"c2", "C"}, {"d2", "D"}};

// Two transfers in opposite directions between the cherries.
Instance crossing_transfers() {
  return from_newick("((c1,~(a1,b1)v#S)u#H,(a2,~(c2,d2)x#S)w#H)root#S;", kFourLeaves, kCrossSigma);
}

// Same, with a duplication above the first transfer.
Instance crossing_with_duplication() {
  auto sigma = kCrossSigma;
  sigma["c3"] = "C";
  return from_newick("(((c1,~(a1,b1)v#S)t#H,c2)u#D,(a2,~(c3,d2)x#S)w#H)root#S;", kFourLeaves, sigma);
}

TreeElement edge_above(const Instance& inst, VertexId x) {
  return TreeElement::edge(inst.species_tree().parent(x), x);
}

std::vector<Time> times(std::initializer_list<int> xs) {
  std::vector<Time> out;
  for (int x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST(TimeFormat, RoundTrip) {
  EXPECT_EQ(format_time(Time(3)), "3/1");
  EXPECT_EQ(format_time(Time(-2, 4)), "-1/2");
  EXPECT_EQ(parse_time("6/4"), Time(3, 2));
  EXPECT_EQ(parse_time("-7"), Time(-7));
  EXPECT_THROW(parse_time("1/0"), InputError);
  EXPECT_THROW(parse_time("x"), InputError);
  EXPECT_THROW(parse_time("1.5"), InputError);
}

TEST(TimeMap, ChecksParentChildPairs) {
  auto t = RootedTree::from_parents({kNoVertex, 0, 0}, {"", "", ""});
  EXPECT_TRUE(check_time_map(t, times({0, 1, 2})).empty());
  Report r = check_time_map(t, times({1, 1, 2}));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.items()[0].gene, (std::vector<VertexId>{1, 0}));
  r = check_time_map(t, times({3, 1, 2}), TreeSide::species);
  EXPECT_EQ(r.size(), 2u);
  EXPECT_TRUE(r.items()[0].gene.empty());
}

TEST(Conditions, F2ConstructedTimesAndPerturbations) {
  auto inst = fixture("F2");
  auto res = construct_time_consistent(inst);
  ASSERT_EQ(res.status, ConstructStatus::success);
  TimeAssignment tau = *res.times;
  const auto& mu = res.map;
  VertexId u = gene(inst, "u"), a = gene(inst, "a");
  VertexId r = species(inst, "r"), A = species(inst, "A"), B = species(inst, "B");
  EXPECT_EQ(mu[u], edge_above(inst, A));
  // Ranks rho_S < r < u < A < B, normalized.
  EXPECT_EQ(tau.species[inst.species().planted_root()], Time(-1));
  EXPECT_EQ(tau.gene[u], Time(0));
  EXPECT_LT(tau.species[r], tau.gene[u]);
  EXPECT_LT(tau.gene[u], tau.species[A]);
  EXPECT_LT(tau.species[A], tau.species[B]);
  EXPECT_TRUE(check_c(inst, mu, tau).empty());
  EXPECT_TRUE(check_d(inst, mu, tau).empty());
  EXPECT_TRUE(check_t(inst, mu, tau.gene).empty());

  auto bad = tau;
  bad.gene[a] = tau.species[A] + 1;
  EXPECT_TRUE(check_c(inst, mu, bad).has("C1"));
  EXPECT_TRUE(check_d(inst, mu, bad).has("D1"));
  bad = tau;
  bad.gene[u] = tau.species[r];
  EXPECT_TRUE(check_c(inst, mu, bad).has("C2"));
  bad = tau;
  bad.gene[u] = tau.species[A] + Time(1, 10);
  EXPECT_TRUE(check_d(inst, mu, bad).has("D2"));
  bad = tau;
  bad.species[r] = tau.gene[u] + Time(1, 10);
  EXPECT_TRUE(check_d(inst, mu, bad).has("D3"));
}

TEST(Conditions, TConditionsOnCrossingTransfers) {
  auto inst = crossing_transfers();
  auto res = construct_time_consistent(inst);
  ASSERT_EQ(res.status, ConstructStatus::success);
  const auto& mu = res.map;
  const std::vector<Time> tg = res.times->gene;
  EXPECT_TRUE(check_t(inst, mu, tg).empty());
  VertexId root = gene(inst, "root"), u = gene(inst, "u"), v = gene(inst, "v");
  auto bad = tg;
  bad[gene(inst, "a2")] = tg[gene(inst, "a1")] + 1;
  EXPECT_TRUE(check_t(inst, mu, bad).has("T1a"));
  bad = tg;
  bad[v] = tg[gene(inst, "a1")];
  bad[gene(inst, "b1")] = bad[v];
  EXPECT_TRUE(check_t(inst, mu, bad).has("T1b"));
  bad = tg;
  bad[u] = tg[gene(inst, "c1")];
  EXPECT_TRUE(check_t(inst, mu, bad).has("T2"));
  bad = tg;
  bad[u] = tg[root];
  EXPECT_TRUE(check_t(inst, mu, bad).has("T3"));
}

TEST(AuxGraph, F2Edges) {
  auto inst = fixture("F2");
  auto mu = build_initial_map(inst);
  // Species r=0, A=1, B=2, planted root 3; transfer u is node 4.
  auto g1 = build_aux_graph(inst, mu, AuxVariant::a1);
  std::vector<AuxEdge> e1{{0, 1, kRuleA2}, {0, 2, kRuleA2}, {0, 4, kRuleA5}, {3, 0, kRuleA2},
                          {4, 1, kRuleA1 | kRuleA5}, {4, 2, kRuleA1}};
  EXPECT_EQ(g1.edges(), e1);
  auto g2 = build_aux_graph(inst, mu, AuxVariant::a2);
  std::vector<AuxEdge> e2{{0, 1, kRuleA2}, {0, 2, kRuleA2}, {0, 4, kRuleA4}, {3, 0, kRuleA2},
                          {4, 1, kRuleA1 | kRuleA3}, {4, 2, kRuleA1}};
  EXPECT_EQ(g2.edges(), e2);
  EXPECT_EQ(g1.gene_node, (std::vector<int>{4, 1, 2}));
  auto topo = topological_order(g1);
  ASSERT_TRUE(topo.acyclic());
  EXPECT_EQ(topo.order, (std::vector<int>{3, 0, 4, 1, 2}));
  EXPECT_EQ(rules_to_string(kRuleA1 | kRuleA5), "A1+A5");
}

TEST(AuxGraph, SelfLoopAndCycleWitness) {
  std::vector<AuxNode> nodes(3);
  for (int i = 0; i < 3; ++i) nodes[i].vertex = i;
  AuxGraph loop(nodes, {{0, 1, kRuleA2}, {1, 1, kRuleA1}}, 0);
  auto t = topological_order(loop);
  ASSERT_FALSE(t.acyclic());
  EXPECT_EQ(t.cycle->ids, (std::vector<int>{1, 1}));
  AuxGraph cyc(nodes, {{2, 1, kRuleA2}, {1, 2, kRuleA1}, {0, 1, kRuleA3}}, 0);
  t = topological_order(cyc);
  ASSERT_FALSE(t.acyclic());
  EXPECT_EQ(t.cycle->ids, (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(t.cycle->rules, (std::vector<std::uint8_t>{kRuleA1, kRuleA2}));
}

TEST(Construct, F4FailsWithFourCycle) {
  auto inst = fixture("F4");
  EXPECT_TRUE(validate_reconciliation(inst, build_initial_map(inst)).empty());
  auto res = construct_time_consistent(inst);
  ASSERT_EQ(res.status, ConstructStatus::not_time_consistent);
  ASSERT_TRUE(res.witness);
  using K = AuxNode::Kind;
  std::vector<AuxNode> expect{{K::species, species(inst, "p1")}, {K::gene, gene(inst, "u_a")},
                              {K::species, species(inst, "p2")}, {K::gene, gene(inst, "u_d")},
                              {K::species, species(inst, "p1")}};
  EXPECT_EQ(res.witness->nodes, expect);
  EXPECT_FALSE(exists_time_consistent(inst, build_initial_map(inst)).consistent);
  EXPECT_FALSE(is_time_consistent(inst, build_initial_map(inst)).consistent);
}

TEST(Construct, F3HasNoReconciliation) {
  auto res = construct_time_consistent(fixture("F3"));
  EXPECT_EQ(res.status, ConstructStatus::no_reconciliation);
  EXPECT_TRUE(res.violations.has("M2iii"));
}

TEST(Construct, CrossingTransfersDependOnPlacement) {
  auto inst = crossing_transfers();
  auto low = build_initial_map(inst);
  VertexId u = gene(inst, "u");
  EXPECT_EQ(low[u], edge_above(inst, species(inst, "C")));
  auto v = is_time_consistent(inst, low);
  EXPECT_FALSE(v.consistent);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->nodes.size(), 5u);

  auto raised = low;
  raised[u] = edge_above(inst, species(inst, "p2"));
  ASSERT_TRUE(validate_reconciliation(inst, raised).empty());
  auto ok = is_time_consistent(inst, raised);
  ASSERT_TRUE(ok.consistent);
  EXPECT_TRUE(check_c(inst, raised, *ok.times).empty());
  EXPECT_TRUE(exists_time_consistent(inst, low).consistent);
  EXPECT_TRUE(oracle_time_consistent(inst, raised));
  EXPECT_FALSE(oracle_time_consistent(inst, low));
}

TEST(Construct, DuplicationAboveTransferIsRaised) {
  auto inst = crossing_with_duplication();
  auto low = build_initial_map(inst);
  ASSERT_TRUE(validate_reconciliation(inst, low).empty());
  EXPECT_FALSE(is_time_consistent(inst, low).consistent);
  auto res = construct_time_consistent(inst);
  ASSERT_EQ(res.status, ConstructStatus::success);
  EXPECT_NE(res.map, low);
  EXPECT_TRUE(validate_reconciliation(inst, res.map).empty());
  EXPECT_TRUE(check_c(inst, res.map, *res.times).empty());
  EXPECT_TRUE(oracle_time_consistent(inst, res.map));
  // Raising only ever moves a vertex up.
  for (VertexId g = 0; g < inst.gene_size(); ++g)
    EXPECT_TRUE(inst.species_index().precedes_or_equal(low[g], res.map[g]));
}

TEST(TimeConditions, NoGeneTimingRescuesF4) {
  auto inst = fixture("F4");
  auto mu = build_initial_map(inst);
  const auto& tree = inst.gene_tree();
  // Leaves of one species share a class, interior vertices are on their own.
  std::map<VertexId, int> leaf_class;
  std::vector<int> cls(inst.gene_size());
  int k = 0;
  for (VertexId g = 0; g < inst.gene_size(); ++g) {
    if (tree.is_leaf(g)) {
      auto [it, fresh] = leaf_class.try_emplace(inst.sigma(g), k);
      if (fresh) ++k;
      cls[g] = it->second;
    } else {
      cls[g] = k++;
    }
  }
  std::vector<unsigned> pred(k, 0);
  for (VertexId g = 1; g < inst.gene_size(); ++g) pred[cls[g]] |= 1u << cls[tree.parent(g)];
  // Every ordering of the classes that is a time map on the gene tree.
  std::vector<int> rank(k);
  std::vector<Time> tg(inst.gene_size());
  long time_maps = 0;
  auto rec = [&](auto&& self, unsigned placed, int next) -> void {
    if (next == k) {
      ++time_maps;
      for (VertexId g = 0; g < inst.gene_size(); ++g) tg[g] = rank[cls[g]];
      EXPECT_FALSE(check_t(inst, mu, tg).empty());
      return;
    }
    for (int c = 0; c < k; ++c) {
      if (placed >> c & 1u || (pred[c] & ~placed) != 0) continue;
      rank[c] = next;
      self(self, placed | 1u << c, next + 1);
    }
  };
  rec(rec, 0u, 0);
  EXPECT_EQ(time_maps, 272);
}

TEST(ExtendTimeMap, CompletesGeneTimes) {
  for (const char* f : {"F1", "F2"}) {
    auto inst = fixture(f);
    auto res = construct_time_consistent(inst);
    ASSERT_EQ(res.status, ConstructStatus::success);
    auto ts = extend_time_map(inst, res.map, res.times->gene);
    TimeAssignment tau{res.times->gene, ts};
    EXPECT_TRUE(check_time_map(inst.species_tree(), ts, TreeSide::species).empty()) << f;
    EXPECT_TRUE(check_d(inst, res.map, tau).empty()) << f;
  }
  auto f2 = fixture("F2");
  auto mu = build_initial_map(f2);
  EXPECT_THROW(extend_time_map(f2, mu, times({1, 0, 2})), PreconditionError);
}

TEST(Construct, RandomSuccessesPassEveryValidator) {
  int successes = 0, failures = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    ScenarioParams p;
    p.seed = seed;
    p.n_species = 3 + static_cast<int>(seed % 8);
    p.n_genes = 20;
    p.p_dup = 0.2;
    p.p_hgt = 0.3;
    p.free_transfers = seed % 2 == 0;
    auto inst = random_scenario(p);
    auto res = construct_time_consistent(inst);
    if (res.status != ConstructStatus::success) {
      ++failures;
      if (!p.free_transfers) ADD_FAILURE() << "contemporaneous transfers must be consistent, seed " << seed;
      continue;
    }
    ++successes;
    const auto& tau = *res.times;
    ASSERT_TRUE(validate_reconciliation(inst, res.map).empty());
    ASSERT_TRUE(check_time_map(inst.gene_tree(), tau.gene).empty());
    ASSERT_TRUE(check_time_map(inst.species_tree(), tau.species, TreeSide::species).empty());
    ASSERT_TRUE(check_c(inst, res.map, tau).empty());
    ASSERT_TRUE(check_d(inst, res.map, tau).empty());
    ASSERT_TRUE(check_t(inst, res.map, tau.gene).empty());
    ASSERT_TRUE(is_time_consistent(inst, res.map).consistent);
    ASSERT_TRUE(exists_time_consistent(inst, build_initial_map(inst)).consistent);
  }
  EXPECT_GT(successes, 100);
  EXPECT_GT(failures, 0);
}
