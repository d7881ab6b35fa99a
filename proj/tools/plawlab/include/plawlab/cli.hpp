#pragma once

#include <iosfwd>

namespace plawlab {

/// Exit statuses.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_numerical = 2;

/// Parses arguments (and an optional --config file) and runs the command.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace plawlab
