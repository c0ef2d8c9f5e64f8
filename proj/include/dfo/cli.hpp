#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dfo {

/// Command-line front end. `args` excludes the program name. Exit codes:
/// 0 success, 1 suite failures, 2 usage/parse/fragment errors.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

} // namespace dfo
