#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace biquat {

// Runs one CLI invocation. `args` excludes the program name. Writes a single
// JSON document to `out` on success (exit 0); on failure writes
// {"error": code, "detail": ..} to `err` and returns 2 for invalid input or
// 1 for internal-consistency failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biquat
