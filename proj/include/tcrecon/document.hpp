#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcrecon/reconciliation.hpp"
#include "tcrecon/scenario.hpp"
#include "tcrecon/time_map.hpp"

namespace tcr {

struct SpeciesRecord {
  VertexId id = 0;
  VertexId parent = kNoVertex;
  std::string name;

  friend bool operator==(const SpeciesRecord&, const SpeciesRecord&) = default;
};

struct GeneRecord {
  VertexId id = 0;
  VertexId parent = kNoVertex;
  std::string name;
  Event event = Event::leaf;
  bool transfer_edge = false;

  friend bool operator==(const GeneRecord&, const GeneRecord&) = default;
};

// JSON scenario file. The species tree is stored without its planted root;
// in the reconciliation, dtl and times sections the planted root has id
// species.size() and is written as "_root".
struct ScenarioDocument {
  std::vector<SpeciesRecord> species;
  std::vector<GeneRecord> genes;
  std::map<std::string, std::string> sigma;  // gene leaf name -> species name
  std::optional<ReconciliationMap> reconciliation;
  std::optional<DtlMap> dtl;
  std::optional<TimeAssignment> times;

  VertexId planted_root() const { return static_cast<VertexId>(species.size()); }
};

// Throws ParseError for malformed JSON (with line and column) or a wrong
// shape (with the JSON path), InputError for ids that do not resolve.
ScenarioDocument parse_scenario(std::string_view text);

// Canonical form: two-space indent, fixed key order, records and map keys in
// ascending id order, trailing newline.
std::string serialize_scenario(const ScenarioDocument& doc);

// Throws StructuralError for malformed trees and InputError for labels or
// sigma entries that do not fit.
Instance instance_from_document(const ScenarioDocument& doc);

// Records in id order; leaf names are taken from the trees.
ScenarioDocument document_from_instance(const Instance& inst);

}  // namespace tcr
