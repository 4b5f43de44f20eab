#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lsf {

/// Runs one `lsf` invocation; args excludes the program name. Returns 0 on success
/// or a true verdict, 1 on a false verdict or no solution within bounds, 2 on errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsf
