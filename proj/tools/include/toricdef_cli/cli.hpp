#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toricdef::cli {

// Exit codes: 0 success, 1 bad input or validation failure, 2 computational inconsistency.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInconsistent = 2;

// args excludes the program name. Input fans come from a path argument or from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace toricdef::cli
