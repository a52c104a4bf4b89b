#pragma once

#include "fbplab/analysis.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/trajectory.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fbp {

class LocalSolution;
class NonlocalSolution;

namespace io {

/// Real numbers are written with 17 significant digits so files round-trip exactly.
std::string format_real(double value);

/// CSV with header t,g,h; one row per dense boundary sample.
std::string boundary_csv(const Trajectory& sol);
std::vector<BoundarySample> parse_boundary_csv(std::string_view text);

/// CSV with header x,v over the native nodes of one profile.
std::string snapshot_csv(const Profile& profile);
/// Reads x,v rows back; t, g and h are taken from the first and last abscissa.
Profile parse_snapshot_csv(std::string_view text, double t = 0.0);

nlohmann::json metadata(const LocalSolution& sol);
/// {eps, beta or c1, dx, dt, kernel, cfl_sigma} plus the variant name.
nlohmann::json metadata(const NonlocalSolution& sol);

nlohmann::json to_json(const RunMeta& meta);
nlohmann::json to_json(const ErrorReport& report);
nlohmann::json to_json(const RateFit& fit);
nlohmann::json to_json(const SandwichReport& report);

/// Two-column eps,error CSV for log-log plots.
std::string rate_csv(const RateFit& fit);
std::vector<std::pair<double, double>> parse_rate_csv(std::string_view text);

/// {code, message, time_of_failure}; time_of_failure is null when unknown.
nlohmann::json error_json(const Error& error);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Writes boundary.csv, snapshot_NNN.csv and metadata.json into `dir`.
void write_solution(const std::filesystem::path& dir, const Trajectory& sol, const nlohmann::json& meta);

} // namespace io
} // namespace fbp
