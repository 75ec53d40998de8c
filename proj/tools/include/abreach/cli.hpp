#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abreach::cli {

enum Exit { kSafe = 0, kUnsafe = 1, kInconclusive = 2, kUsage = 3 };

/// Runs one command line (args exclude the program name). The report goes
/// to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace abreach::cli
