#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace numeraire::cli {

enum ExitCode : int { ok = 0, invalid_input = 2, numerical_failure = 3, usage = 64 };

/// Runs one command line (args excludes the program name). Results go to `out`
/// or the --output file, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace numeraire::cli
