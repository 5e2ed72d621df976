#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nnr::cli {

enum ExitCode : int { kOk = 0, kFail = 1, kUsage = 2, kTooLarge = 3 };

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace nnr::cli
