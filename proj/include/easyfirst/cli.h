#ifndef EASYFIRST_CLI_H_
#define EASYFIRST_CLI_H_

#include <iosfwd>

namespace easyfirst {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Entry point of the `easyfirst` tool: induce-heads, train, parse, eval,
// bigram-build, cluster-check. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace easyfirst

#endif  // EASYFIRST_CLI_H_
