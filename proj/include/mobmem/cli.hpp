#ifndef MOBMEM_CLI_HPP
#define MOBMEM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace mobmem::cli {

enum ExitCode : int { kSuccess = 0, kModelError = 1, kIoError = 2 };

/// Entry point of the `mobmem` tool. `args` excludes the program name.
///
///   validate <file>
///   run <file> [--seed N] [--max-steps N] [--trace FILE] [--snapshot-every N] [--no-self-check]
///   bone [--units N] [--density R] [--capacity D] [--oc N] [--ob N] [--cycles N]
///        [--seed N] [--max-steps N] [--emit-model FILE] [--trace FILE]
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal rendering, independent of the C++ locale.
std::string format_decimal(double value);

}  // namespace mobmem::cli

#endif  // MOBMEM_CLI_HPP
