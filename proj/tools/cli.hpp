#ifndef KINREL_TOOLS_CLI_HPP
#define KINREL_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace kinrel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name).  Tables go to `out`
/// unless --out is given; errors are written to `err` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kinrel::cli

#endif  // KINREL_TOOLS_CLI_HPP
