#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svdd::tools {

/// Runs the svdd command line with `args` (program name excluded).
/// Returns the exit code: 0 on success, 1 on a runtime failure, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svdd::tools
