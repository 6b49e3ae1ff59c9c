#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ymflow::cli {

/// Exit codes: 0 success, 1 computation failure (a JSON error record is
/// written to out), 2 usage error. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ymflow::cli
