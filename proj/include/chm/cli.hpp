#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chm::cli {

inline constexpr int kExitCertified = 0;
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // verify-matrix: not Hadamard
inline constexpr int kExitInputError = 2;
inline constexpr int kExitUndecided = 10;
inline constexpr int kExitInapplicable = 11;

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chm::cli
