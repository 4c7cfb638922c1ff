#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcpp {

/// Exit codes of every command.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitInfeasible = 2, kExitReject = 3 };

/// Runs the command line `args` (without the program name). Files named by
/// --out are written directly; otherwise results go to `out`. Diagnostics and
/// warnings go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Header row of `compare`.
inline constexpr const char* kCompareHeader =
    "instance,n,m,k,c,approx_weight,opt_weight,ratio,approx_ms,oracle_ms";

}  // namespace hcpp
