#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmech::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kPropertyFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBudget = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmech::cli
