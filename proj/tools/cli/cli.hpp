#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nacmint::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2, kInternalError = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nacmint::cli
