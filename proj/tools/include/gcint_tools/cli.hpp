#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gcint::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

// Parses and runs one command line (args exclude the program name).
// Summary tables go to `out`, diagnostics to `err`; --out writes JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gcint::cli
