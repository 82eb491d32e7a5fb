#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace osf {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kParseFailure = 1, kSemanticFailure = 2, kCapFailure = 3 };

/// Runs one osf-forge invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace osf
