#pragma once

#include <iosfwd>

namespace fbp::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed_checks = 1;
inline constexpr int exit_invalid_input = 2;
inline constexpr int exit_solver_error = 3;

/// Entry point behind the fbplab executable; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fbp::cli
