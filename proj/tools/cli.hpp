#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opalg::cli {

enum ExitCode : int { kOk = 0, kRejected = 1, kInputError = 2 };

/// Runs one command line; reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes the worked-example models under `dir`; returns the files written.
std::vector<std::string> write_examples(const std::string& dir);

}  // namespace opalg::cli
