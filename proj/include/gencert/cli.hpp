#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gencert::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;  // verify-concentration found a violation
inline constexpr int kInvalid = 2;      // validation error; JSON object on `err`

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gencert::cli
