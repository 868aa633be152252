#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "tcrecon/document.hpp"
#include "tcrecon/newick.hpp"
#include "tcrecon/scenario.hpp"

namespace tcr::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name + ".json";
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Instance fixture(const std::string& name) {
  return instance_from_document(parse_scenario(read_text(fixture_path(name))));
}

inline Instance from_newick(const std::string& gene, const std::string& species,
                            const std::map<std::string, std::string>& sigma) {
  std::string tsv;
  for (const auto& [g, s] : sigma) tsv += g + "\t" + s + "\n";
  return instance_from_document(parse_newick_pair(gene, species, tsv));
}

// Gene vertex with the given name.
inline VertexId gene(const Instance& inst, const std::string& name) {
  for (VertexId v = 0; v < inst.gene_size(); ++v)
    if (inst.gene_tree().label(v) == name) return v;
  return kNoVertex;
}

// Species vertex with the given name (interior names included).
inline VertexId species(const Instance& inst, const std::string& name) {
  for (VertexId v = 0; v < inst.species_size(); ++v)
    if (inst.species_tree().label(v) == name) return v;
  return kNoVertex;
}

}  // namespace tcr::testing
