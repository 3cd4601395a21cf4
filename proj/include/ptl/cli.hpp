#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ptl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIdentityFailure = 2;

// Environment variable consulted for the default seed; --seed wins.
inline constexpr const char* kSeedEnv = "PTL_SEED";

// One command-line invocation; args[0] is the program name. Reports go to
// `out`, diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptl
