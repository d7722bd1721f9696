#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bernsup::cli {

/// Run the command line given argv-style arguments (without the program
/// name). Reports go to `out` unless --out is given; diagnostics go to `err`.
/// Exit codes: 0 success, 1 theorem-backed verification failures, 2 usage
/// error, 3 validation error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bernsup::cli
