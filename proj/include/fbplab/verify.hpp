#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fbp::verify {

enum class Suite { kernel, local, nonlocal, sandwich, mass, all };

/// Parses "kernel", "local", ...; throws InvalidArgument otherwise.
Suite parse_suite(std::string_view name);
std::string_view to_string(Suite suite) noexcept;

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double value = 0.0;     ///< measured quantity
    double threshold = 0.0; ///< bound it was compared against
    std::string detail;
};

/// Runs a property suite at fixed desk-scale resolutions. Checks that throw are
/// reported as failures carrying the error text.
std::vector<CheckResult> run_suite(Suite suite);

bool all_passed(const std::vector<CheckResult>& results) noexcept;

/// Fixed-width pass/fail table, one row per check.
std::string format_table(const std::vector<CheckResult>& results);

} // namespace fbp::verify
