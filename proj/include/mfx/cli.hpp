#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mfx::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;   // data or validation error
inline constexpr int kExitUsage = 2;  // bad command line

// Entry point shared by the executable and the tests. args excludes argv[0].
// Subcommands: split-bands, mfdfa, analyze, synth, listening, report.
// The resolved configuration is echoed to `err` as one JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mfx::cli
