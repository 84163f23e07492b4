#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hjb::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidConfig = 1,
    kSolverFailure = 2,
    kCheckFailed = 3,  // failed property check, or a greedy run that increased V
};

/// Runs one subcommand (run1d | run2d | sweep | check). `args` excludes the
/// program name. Artifacts go to the paths given by the flags.
int execute_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, "nan"/"inf" for non-finite values.
std::string format_number(double value);

}  // namespace hjb::cli
