#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace clg::cli {

enum ExitCode { ok = 0, usage = 1, data_error = 2, degenerate = 3 };

// Runs one `clg` subcommand. args[0] is the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clg::cli
