#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace romanlens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command line (without the program name). Reports go to `out`,
// diagnostics to `err`; `romanize` reads text from `in`.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr, std::istream& in = std::cin);

}  // namespace romanlens::cli
