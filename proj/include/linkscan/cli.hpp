#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linkscan::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDataError = 2,
    kNumericalError = 3,
};

/// Runs `linkscan <describe|linear|kernel|analyze|simulate> ...`.
///
/// Results go to `out` unless `--out` names a file; diagnostics go to `err`.
/// Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linkscan::cli
