#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tcrecon/reconciliation.hpp"
#include "tcrecon/report.hpp"
#include "tcrecon/scenario.hpp"

namespace tcr {

using Time = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                          boost::multiprecision::et_off>;

// "p/q" in lowest terms with q > 0; integers print as "n/1".
std::string format_time(const Time& t);
// Accepts "p/q" or a bare integer. Throws InputError otherwise.
Time parse_time(std::string_view s);

struct TimeAssignment {
  std::vector<Time> gene;
  std::vector<Time> species;
};

enum class TreeSide { gene, species };

// Every parent-child pair must have parent time < child time. Violations are
// reported under "time_map" with the pair (child, parent) on the given side.
Report check_time_map(const RootedTree& tree, std::span<const Time> tau,
                      TreeSide side = TreeSide::gene);

// C1 (anchored vertices share the time of their image) and C2 (duplications
// and transfers strictly inside their image edge). Throws InputError if an
// image has the wrong kind for its event.
Report check_c(const Instance& inst, const ReconciliationMap& mu, const TimeAssignment& tau);

// D1-D3 with strict inequalities.
Report check_d(const Instance& inst, const ReconciliationMap& mu, const TimeAssignment& tau);

// T1a, T1b, T2, T3 on gene times alone.
Report check_t(const Instance& inst, const ReconciliationMap& mu, std::span<const Time> tau_gene);

// Species times satisfying D1-D3 together with tau_gene. Anchored species
// take the time of their preimage, the planted root gets
// min(-1, tau(gene root) - 1), and the rest are placed root-first strictly
// between their lower and upper bounds. Throws PreconditionError if
// tau_gene is not a time map or fails a T-condition.
std::vector<Time> extend_time_map(const Instance& inst, const ReconciliationMap& mu,
                                  std::span<const Time> tau_gene);

}  // namespace tcr
