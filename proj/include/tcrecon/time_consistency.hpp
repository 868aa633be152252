#pragma once

#include <optional>

#include "tcrecon/aux_graph.hpp"
#include "tcrecon/reconciliation.hpp"
#include "tcrecon/report.hpp"
#include "tcrecon/time_map.hpp"

namespace tcr {

struct TcVerdict {
  bool consistent = false;
  std::optional<TimeAssignment> times;
  std::optional<CycleWitness> witness;
};

// Decides whether mu itself is time-consistent. On success the times satisfy
// check_time_map on both trees and check_c. Throws InputError if mu is not a
// valid reconciliation map.
TcVerdict is_time_consistent(const Instance& inst, const ReconciliationMap& mu);

// Decides whether some time-consistent map exists, given any valid map
// mu_any. On success the times satisfy D1-D3 with respect to mu_any.
TcVerdict exists_time_consistent(const Instance& inst, const ReconciliationMap& mu_any);

enum class ConstructStatus { success, no_reconciliation, not_time_consistent };

const char* to_string(ConstructStatus s);

struct ConstructResult {
  ConstructStatus status = ConstructStatus::no_reconciliation;
  ReconciliationMap map;
  std::optional<TimeAssignment> times;
  std::optional<CycleWitness> witness;
  // Why the initial map is invalid, for no_reconciliation.
  Report violations;
};

// Builds a time-consistent map and its time stamps, or explains why none
// exists. Gene and species times are normalized so the gene root sits at 0
// and the planted root at -1.
ConstructResult construct_time_consistent(const Instance& inst);

}  // namespace tcr
