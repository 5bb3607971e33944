// Command-line front end. Exit codes: 0 success, 2 config error, 3 pipeline
// error, 4 a run missed the goal under --require-goal.

#pragma once

#include <iosfwd>

namespace fmplan {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPipeline = 3;
inline constexpr int kExitOutcome = 4;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fmplan
