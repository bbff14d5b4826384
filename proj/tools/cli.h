#ifndef C2A2_TOOLS_CLI_H_
#define C2A2_TOOLS_CLI_H_

#include <ostream>

namespace c2a2 {

// Exit codes: 0 success, 1 validation/usage error, 2 I/O error.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace c2a2

#endif  // C2A2_TOOLS_CLI_H_
