#ifndef SAC_TOOLS_CLI_HPP
#define SAC_TOOLS_CLI_HPP

#include <ostream>

namespace sac::cli {

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kConfigError = 2, kStudyError = 3 };

/// Entry point of the `sac` executable, with the output streams made explicit for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sac::cli

#endif  // SAC_TOOLS_CLI_HPP
