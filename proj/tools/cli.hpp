#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ginovl::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kStatisticalFailure = 2 };

/// Runs one command line (without the program name). Output goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "log:a:b:n", "lin:a:b:n" or a comma list.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace ginovl::cli
