#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chase::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Data goes to `out` (or files named by --out),
// diagnostics and usage text to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Splices the options stored in a --config JSON file (or the "parameters"
// object of a manifest) into the argument list. Options already present on
// the command line are left alone, so flags win over the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace chase::cli
