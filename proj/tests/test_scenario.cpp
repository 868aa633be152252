#include <gtest/gtest.h>

#include "helpers.hpp"
#include "tcrecon/errors.hpp"
#include "tcrecon/oracle.hpp"
#include "tcrecon/scenario.hpp"

using namespace tcr;
using tcr::testing::fixture;
using tcr::testing::from_newick;
using tcr::testing::gene;
using tcr::testing::species;

namespace {

std::vector<VertexId> names_to_species(const Instance& inst, std::vector<std::string> names) {
  std::vector<VertexId> out;
  for (const auto& n : names) out.push_back(species(inst, n));
  std::sort(out.begin(), out.end());
  return out;
}

// Component roots by a scan independent of remove_transfer_edges: a vertex
// roots a component iff it is the root or its incoming edge is a transfer.
std::vector<VertexId> scan_roots(const Instance& inst) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < inst.gene_size(); ++v)
    if (inst.gene_tree().is_root(v) || inst.transfer_in(v)) out.push_back(v);
  return out;
}

}  // namespace

TEST(SpeciesTree, AugmentSingleSpecies) {
  auto s = augment_species_tree(RootedTree::from_parents({kNoVertex}, {"A"}));
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.planted_root(), 1);
  EXPECT_EQ(s.core_root(), 0);
  EXPECT_EQ(s.find("A"), 0);
}

TEST(SpeciesTree, AugmentCherryPreservesLeaves) {
  auto s = augment_species_tree(RootedTree::from_parents({kNoVertex, 0, 0}, {"r", "A", "B"}));
  EXPECT_EQ(s.size(), 4);
  EXPECT_EQ(s.tree().parent(0), s.planted_root());
  EXPECT_EQ(s.tree().child_count(s.planted_root()), 1u);
  auto below_planted = s.index().leaf_set(s.planted_root());
  auto below_core = s.index().leaf_set(s.core_root());
  EXPECT_EQ(std::vector<VertexId>(below_planted.begin(), below_planted.end()),
            std::vector<VertexId>(below_core.begin(), below_core.end()));
  EXPECT_EQ(s.name(1), "A");
  EXPECT_EQ(s.find("C"), kNoVertex);
}

TEST(SpeciesTree, AugmentRejectsBadInput) {
  EXPECT_THROW(augment_species_tree(RootedTree{}), PreconditionError);
  EXPECT_THROW(augment_species_tree(RootedTree::from_parents({kNoVertex, 0, 1, 1}, {"", "", "A", "B"})),
               PreconditionError);
  EXPECT_THROW(augment_species_tree(RootedTree::from_parents({kNoVertex, 0, 0}, {"r", "A", ""})),
               PreconditionError);
}

TEST(GeneTree, RejectsInconsistentLabels) {
  auto t = RootedTree::from_parents({kNoVertex, 0, 0}, {"x", "a", "b"});
  using E = Event;
  EXPECT_NO_THROW(GeneTree(t, {E::transfer, E::leaf, E::leaf}, {false, false, true}, {"", "A", "B"}));
  EXPECT_THROW(GeneTree(t, {E::leaf, E::leaf, E::leaf}, {false, false, false}, {"", "A", "B"}), InputError);
  EXPECT_THROW(GeneTree(t, {E::speciation, E::leaf, E::speciation}, {false, false, false}, {"", "A", "B"}),
               InputError);
  EXPECT_THROW(GeneTree(t, {E::speciation, E::leaf, E::leaf}, {false, false, true}, {"", "A", "B"}),
               InputError);
  EXPECT_THROW(GeneTree(t, {E::transfer, E::leaf, E::leaf}, {true, false, true}, {"", "A", "B"}), InputError);
  EXPECT_THROW(GeneTree(t, {E::speciation, E::leaf, E::leaf}, {false, false, false}, {"", "A", ""}),
               InputError);
}

TEST(Instance, UnknownSpeciesNamesTheLeaf) {
  try {
    from_newick("((a,b)x#S);", "(A,B);", {{"a", "A"}, {"b", "Z"}});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos);
  }
}

TEST(TransferForest, NoTransfersGiveOneComponent) {
  auto inst = fixture("F1");
  EXPECT_EQ(inst.forest().roots, std::vector<VertexId>{0});
  for (auto c : inst.forest().component) EXPECT_EQ(c, 0);
}

TEST(TransferForest, F2HasTwoComponents) {
  auto inst = fixture("F2");
  std::vector<VertexId> expect{gene(inst, "u"), gene(inst, "b")};
  EXPECT_EQ(inst.forest().roots, expect);
  EXPECT_EQ(inst.forest().roots, scan_roots(inst));
}

TEST(TransferForest, F4HasFourComponents) {
  auto inst = fixture("F4");
  std::vector<VertexId> expect{gene(inst, "u_c"), gene(inst, "s1"), gene(inst, "s2"), gene(inst, "s1pp")};
  EXPECT_EQ(inst.forest().roots, expect);
  EXPECT_EQ(inst.forest().roots, scan_roots(inst));
  // Every vertex sits in the component of its nearest component root above.
  for (VertexId v = 0; v < inst.gene_size(); ++v) {
    VertexId x = v;
    while (!inst.gene_tree().is_root(x) && !inst.transfer_in(x)) x = inst.gene_tree().parent(x);
    EXPECT_EQ(inst.forest().roots[inst.forest().component[v]], x);
  }
}

TEST(SigmaHat, Fixtures) {
  auto f1 = fixture("F1");
  EXPECT_EQ(sigma_hat(f1, gene(f1, "a")), names_to_species(f1, {"A"}));
  auto f2 = fixture("F2");
  EXPECT_EQ(sigma_hat(f2, gene(f2, "u")), names_to_species(f2, {"A"}));
  EXPECT_EQ(sigma_hat(f2, gene(f2, "u")), naive_sigma_hat(f2, gene(f2, "u")));
  auto f4 = fixture("F4");
  EXPECT_EQ(sigma_hat(f4, gene(f4, "s1")), names_to_species(f4, {"A", "B"}));
  for (VertexId v = 0; v < f4.gene_size(); ++v) EXPECT_EQ(sigma_hat(f4, v), naive_sigma_hat(f4, v));
}

TEST(Observability, FixturesAreObservable) {
  for (const char* f : {"F1", "F2", "F3", "F4"}) EXPECT_TRUE(check_observability(fixture(f)).empty()) << f;
}

TEST(Observability, OverlappingTransferIsSigma2) {
  auto inst = from_newick("(a,c,~a2)u#H;", "((A,B)q,C)r;", {{"a", "A"}, {"c", "C"}, {"a2", "A"}});
  Report r = check_observability(inst);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.items()[0].condition, "Sigma2");
  EXPECT_EQ(r.items()[0].gene, (std::vector<VertexId>{gene(inst, "u"), gene(inst, "a2")}));
}

TEST(Observability, DetectsEachCondition) {
  // Speciation over two leaves of the same species.
  auto s1 = from_newick("(a,b)x#S;", "(A,B);", {{"a", "A"}, {"b", "A"}});
  EXPECT_TRUE(check_observability(s1).has("Sigma1"));
  // Transfer vertex without a transfer edge, and one with only transfer edges.
  auto o2a = from_newick("(a,b)x#H;", "(A,B);", {{"a", "A"}, {"b", "B"}});
  EXPECT_TRUE(check_observability(o2a).has("O2"));
  auto o2b = from_newick("(~a,~b)x#H;", "(A,B);", {{"a", "A"}, {"b", "B"}});
  EXPECT_TRUE(check_observability(o2b).has("O2"));
  // Degree-two interior vertex.
  auto o1 = from_newick("((a)y#D,b)x#S;", "(A,B);", {{"a", "A"}, {"b", "B"}});
  Report r = check_observability(o1);
  ASSERT_TRUE(r.has("O1"));
  EXPECT_EQ(r.items()[0].gene, std::vector<VertexId>{gene(o1, "y")});
}

TEST(Observability, ComponentLeavesPartitionOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    ScenarioParams p;
    p.seed = seed;
    p.n_species = 6;
    p.n_genes = 30;
    p.p_dup = 0.2;
    p.p_hgt = 0.2;
    auto inst = random_scenario(p);
    ASSERT_TRUE(check_observability(inst).empty());
    // Component leaf sets partition the leaves: each component has a leaf.
    std::vector<int> leaves(inst.forest().roots.size(), 0);
    for (VertexId v = 0; v < inst.gene_size(); ++v)
      if (inst.gene_tree().is_leaf(v)) ++leaves[inst.forest().component[v]];
    for (int c : leaves) ASSERT_GT(c, 0);
    // sigma_hat shrinks going down inside a component.
    for (VertexId v = 0; v < inst.gene_size(); ++v) {
      if (inst.gene_tree().is_root(v) || inst.transfer_in(v)) continue;
      auto child = sigma_hat(inst, v), parent = sigma_hat(inst, inst.gene_tree().parent(v));
      ASSERT_TRUE(std::includes(parent.begin(), parent.end(), child.begin(), child.end()));
    }
  }
}
