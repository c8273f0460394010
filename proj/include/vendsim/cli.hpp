#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vendsim::cli {

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kExpectationFailed = 1;
constexpr int kUsageOrInputError = 2;

// Entry point for `vendsim <args...>`; args exclude the program name.
int main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
         std::ostream& err);

} // namespace vendsim::cli
