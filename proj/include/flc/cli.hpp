#pragma once

// The `flc` command-line driver.  Exit codes: 0 affirmative verdict, 1
// negative verdict (unsat, countermodel, failed or inconclusive suite), 2
// usage, parse or internal error.

#include <ostream>
#include <string>
#include <vector>

namespace flc {

inline constexpr int kExitAffirmative = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitError = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flc
