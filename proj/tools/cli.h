// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_TOOLS_CLI_H_
#define SPECMULT_TOOLS_CLI_H_

#include <iosfwd>

namespace specmult {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

// Entry point of the `specmult` tool; writes reports to out and diagnostics
// to err and returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specmult

#endif  // SPECMULT_TOOLS_CLI_H_
