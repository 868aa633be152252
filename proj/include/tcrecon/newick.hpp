#pragma once

#include <string_view>

#include "tcrecon/document.hpp"

namespace tcr {

// Gene Newick: interior labels end in #S, #D or #H (speciation, duplication,
// transfer), optionally preceded by a name; leaf labels are gene names. A
// "~" in front of a child (before its label or its opening parenthesis)
// marks the edge into it as a transfer edge. Species Newick is plain with
// named leaves. Branch lengths and [comments] are ignored; an unlabeled root
// with a single child is dropped. Vertex ids follow preorder.
//
// sigma_tsv: lines "gene<TAB>species"; blank lines and lines starting with
// '#' are skipped.
//
// Throws ParseError with the position of the offending token.
ScenarioDocument parse_newick_pair(std::string_view gene_newick, std::string_view species_newick,
                                   std::string_view sigma_tsv);

}  // namespace tcr
