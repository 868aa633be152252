#pragma once

#include <cstdint>
#include <vector>

#include "tcrecon/reconciliation.hpp"
#include "tcrecon/scenario.hpp"

namespace tcr {

struct ScenarioParams {
  std::uint64_t seed = 1;
  int n_species = 4;
  // Upper bound on gene leaves; larger samples are rejected and redrawn.
  int n_genes = 8;
  double p_dup = 0.1;
  double p_hgt = 0.1;
  double p_loss = 0.1;
  // Transfers normally go to an edge alive at the same time, which keeps
  // every sample time-consistent. With this flag the recipient is any
  // incomparable edge at a random time on it.
  bool free_transfers = false;
  int max_attempts = 10000;
  // Samples with more vertices than this before pruning are rejected.
  int max_vertices = 2000000;
};

// Dated Yule species tree (leaves S1..Sn, preorder ids), one gene lineage
// evolved from the planted edge with duplications, transfers and losses,
// losses pruned, degree-2 vertices suppressed. Only observable instances are
// returned. Deterministic in params. Throws PreconditionError for bad
// params and Error when no admissible sample is found.
Instance random_scenario(const ScenarioParams& params);

// Reference implementations by parent-pointer walks.
bool naive_is_ancestor(const RootedTree& t, VertexId u, VertexId v);
VertexId naive_lca(const RootedTree& t, VertexId u, VertexId v);
std::vector<VertexId> naive_sigma_hat(const Instance& inst, VertexId v);
LcaSigmaMap naive_lca_sigma(const Instance& inst);

// All valid reconciliation maps, in odometer order (lowest gene id varies
// slowest). Throws SizeCapError if the candidate count exceeds cap.
std::vector<ReconciliationMap> enumerate_reconciliations(const Instance& inst,
                                                         double cap = 1e6);

enum class OracleMode { automatic, permutation, closure };

// Species vertices plus duplication/transfer gene vertices; anchored gene
// vertices share their image's class.
int merged_class_count(const Instance& inst);

// Literal check of the time-map definition plus C1/C2 over all orders of the
// merged classes (permutation, at most 9 classes) or via transitive closure
// of the forced precedences (closure, at most 60). Throws SizeCapError
// beyond the mode's cap.
bool oracle_time_consistent(const Instance& inst, const ReconciliationMap& mu,
                            OracleMode mode = OracleMode::automatic);

bool oracle_exists_tc(const Instance& inst, OracleMode mode = OracleMode::automatic,
                      double cap = 1e6);

}  // namespace tcr
