#pragma once

// Command-line front end: speed, profile, portrait, series, pde, verify.
//
// Every command writes its CSV files plus manifest.json into --out. Options
// resolve as command line > --config file > built-in defaults; the config
// file is either `key = value` lines (subcommand keys as `pde.N = 2001` or
// under a `[pde]` section) or a manifest.json from an earlier run.

#include <ostream>
#include <string_view>

namespace zfk::cli {

inline constexpr std::string_view version = "0.1.0";

enum ExitCode : int {
    success = 0,
    computation_failure = 1,
    usage_error = 2,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace zfk::cli
