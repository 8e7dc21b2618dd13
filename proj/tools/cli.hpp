// Command-line front end.  Exit status: 0 true / accepted / no counterexample,
// 1 false / witness found / rejected, 2 usage or data errors.

#pragma once

#include <ostream>
#include <string>

namespace wel::cli {

inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitError = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Golden facts, validities, non-validities, fixture separations, D-necessitation.
int reproduce_paper(const std::string& corpus, bool json, std::ostream& out);

}  // namespace wel::cli
