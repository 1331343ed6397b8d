#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace discbal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the `discbal` tool. Subcommands: run, sweep, oracle, diag,
/// gen. Returns 0 on success, 1 on validation/usage errors, 2 on runtime
/// errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace discbal::cli
