#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace whl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `whl` command line tool. `args` excludes the program
/// name. CSV goes to `out` unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace whl
