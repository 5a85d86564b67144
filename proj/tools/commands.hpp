#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zenolab::cli {

enum ExitCode : int { ok = 0, config_error = 2, numeric_contract = 3, io_error = 4 };

// Full command-line entry point; args excludes the program name.
// Diagnostics go to `err`; data is written to --out, or to `out` when no path is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 17 significant digits, independent of the global locale.
std::string format_number(double x);

} // namespace zenolab::cli
