#include "tcrecon/report.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace tcr {

void Report::add(std::string condition, std::vector<VertexId> gene,
                 std::vector<VertexId> species, std::string detail) {
  items_.push_back(
      {std::move(condition), std::move(gene), std::move(species), std::move(detail)});
}

void Report::append(const Report& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

std::size_t Report::count(std::string_view condition) const {
  return static_cast<std::size_t>(
      std::count_if(items_.begin(), items_.end(),
                    [&](const Violation& v) { return v.condition == condition; }));
}

void Report::sort() {
  std::stable_sort(items_.begin(), items_.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::tie(a.condition, a.gene, a.species) <
                            std::tie(b.condition, b.gene, b.species);
                   });
}

std::string to_string(const Report& report) {
  std::ostringstream os;
  for (const auto& v : report) {
    os << v.condition;
    if (!v.gene.empty()) {
      os << " gene";
      for (auto g : v.gene) os << ' ' << g;
    }
    if (!v.species.empty()) {
      os << " species";
      for (auto s : v.species) os << ' ' << s;
    }
    if (!v.detail.empty()) os << ": " << v.detail;
    os << '\n';
  }
  return os.str();
}

}  // namespace tcr
