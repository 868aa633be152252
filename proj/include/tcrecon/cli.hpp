#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcr {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,  // well-formed input, negative verdict or violations
  kExitInput = 2,     // input error, including unsupported tree shapes
  kExitParse = 3,     // malformed JSON, Newick or TSV
  kExitInternal = 4,  // broken internal invariant
};

// Runs one CLI invocation. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcr
