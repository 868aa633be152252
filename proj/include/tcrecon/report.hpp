#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tcrecon/rooted_tree.hpp"

namespace tcr {

// One violated condition. `condition` is the short axiom id ("O1", "M2iii",
// "C2", "IVb", ...); the vertex lists name the gene- and species-tree
// vertices involved, in the order the condition mentions them.
struct Violation {
  std::string condition;
  std::vector<VertexId> gene;
  std::vector<VertexId> species;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class Report {
 public:
  void add(Violation v) { items_.push_back(std::move(v)); }
  void add(std::string condition, std::vector<VertexId> gene,
           std::vector<VertexId> species, std::string detail);
  void append(const Report& other);

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  std::size_t count(std::string_view condition) const;
  bool has(std::string_view condition) const { return count(condition) > 0; }

  // Orders violations by (condition, gene, species) so output does not depend
  // on traversal order.
  void sort();

  const std::vector<Violation>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<Violation> items_;
};

std::string to_string(const Report& report);

}  // namespace tcr
