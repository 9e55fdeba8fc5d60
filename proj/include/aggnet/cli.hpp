#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aggnet {

// Runs the aggnet command line. args excludes the program name. Returns the
// process exit code: 0 success, 2 input error, 3 numerical error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace aggnet
