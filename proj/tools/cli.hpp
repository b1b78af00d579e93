#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qgms::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. `args` excludes the program name. JSON and reports
/// go to `out`, logs and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgms::cli
