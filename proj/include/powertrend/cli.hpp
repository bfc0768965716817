#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace powertrend::cli {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_data = 2,
    exit_degenerate = 3,
};

/// Runs the command line tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "lo:hi:step" or "a,b,c" into an increasing grid of positive values.
std::vector<double> parse_grid(const std::string& text);
/// Parses "lo:hi:step" or "a,b,c" into integers.
std::vector<std::size_t> parse_int_grid(const std::string& text);

} // namespace powertrend::cli
