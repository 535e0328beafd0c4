#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commodpi::cli {

/// Runs one subcommand. `args` excludes the program name. Results go to `--out`
/// when given, else to `out`; diagnostics go to `err`.
///
/// Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or config,
/// 3 numerical failure (inversion error or a non-finite result).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace commodpi::cli
