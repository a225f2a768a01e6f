#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treecolor {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_internal = 3;

/// Runs one subcommand (certify, integrate, simulate, sweep, verify). `args`
/// excludes the program name. A "--config FILE" argument is expanded into
/// the file's key=value settings, which explicit flags override.
/// Returns 0 on success, 1 on certification or verification failure, 2 on
/// invalid configuration and 3 on internal errors.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace treecolor
