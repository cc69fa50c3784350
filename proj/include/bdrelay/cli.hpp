#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

namespace bdrelay {

inline constexpr std::string_view kToolName = "bdrelay";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitCompute = 3 };

/// Runs the command-line tool. Results go to `out` unless --output names a
/// file (written through a temporary and renamed into place); diagnostics go
/// to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` atomically.
void write_atomically(const std::string& path, std::string_view content);

}  // namespace bdrelay
