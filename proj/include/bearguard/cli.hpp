#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bearguard {

// Exit codes shared by every subcommand: 0 success, 2 input/parse error,
// 3 domain error (violated invariant, refused overwrite, empty ground
// truth, ...). Stable for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitDomainError = 3;

// Runs the bearguard CLI (args excludes the program name). All regular
// output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace bearguard
