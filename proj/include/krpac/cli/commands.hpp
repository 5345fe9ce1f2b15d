#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace krpac::cli {

/// Exit codes of dispatch().
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

/// Runs one subcommand (toy, certify, mgf-check, deps, badset). args excludes
/// the program name. Diagnostics go to err, summaries to out.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace krpac::cli
