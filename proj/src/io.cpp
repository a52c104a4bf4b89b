#include "fbplab/io.hpp"

#include "fbplab/local_fbp.hpp"
#include "fbplab/nonlocal_fbp.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fbp::io {

namespace {

std::vector<std::vector<double>> parse_rows(std::string_view text, std::string_view header, std::size_t columns) {
    std::vector<std::vector<double>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw Error(ErrorCode::IoError, "expected CSV header '" + std::string(header) + "'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.c_str();
        for (std::size_t c = 0; c < columns; ++c) {
            char* end = nullptr;
            const double value = std::strtod(p, &end);
            if (end == p) throw Error(ErrorCode::IoError, "malformed CSV row: " + line);
            row.push_back(value);
            p = end;
            if (c + 1 < columns) {
                if (*p != ',') throw Error(ErrorCode::IoError, "malformed CSV row: " + line);
                ++p;
            }
        }
        if (*p != '\0') throw Error(ErrorCode::IoError, "trailing data in CSV row: " + line);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string boundary_csv(const Trajectory& sol) {
    std::string out = "t,g,h\n";
    for (const BoundarySample& s : sol.boundary()) {
        out += format_real(s.t);
        out += ',';
        out += format_real(s.g);
        out += ',';
        out += format_real(s.h);
        out += '\n';
    }
    return out;
}

std::vector<BoundarySample> parse_boundary_csv(std::string_view text) {
    std::vector<BoundarySample> out;
    for (const auto& r : parse_rows(text, "t,g,h", 3)) out.push_back({r[0], r[1], r[2]});
    return out;
}

std::string snapshot_csv(const Profile& profile) {
    std::string out = "x,v\n";
    for (std::size_t i = 0; i < profile.x.size(); ++i) {
        out += format_real(profile.x[i]);
        out += ',';
        out += format_real(profile.v[i]);
        out += '\n';
    }
    return out;
}

Profile parse_snapshot_csv(std::string_view text, double t) {
    Profile p;
    p.t = t;
    for (const auto& r : parse_rows(text, "x,v", 2)) {
        p.x.push_back(r[0]);
        p.v.push_back(r[1]);
    }
    if (!p.x.empty()) {
        p.g = p.x.front();
        p.h = p.x.back();
    }
    return p;
}

nlohmann::json metadata(const LocalSolution& sol) {
    const auto& k = sol.knobs();
    return {{"solver", "local"},
            {"N", sol.resolution().N},
            {"dt", sol.resolution().dt},
            {"knobs", {{"A", k.A}, {"B", k.B}, {"gamma1", k.gamma1}, {"eps", k.eps}}},
            {"T", sol.horizon()},
            {"snapshots", sol.profiles().size()}};
}

nlohmann::json metadata(const NonlocalSolution& sol) {
    const NonlocalResolution& r = sol.resolution();
    nlohmann::json j = {{"solver", "nonlocal"},
                        {"eps", r.eps},
                        {"dx", r.dx},
                        {"dt", r.dt},
                        {"kernel", r.kernel},
                        {"cfl_sigma", r.cfl_sigma},
                        {"variant", r.variant.kind == NonlocalVariant::Kind::modified ? "modified" : "unmodified"},
                        {"T", sol.horizon()},
                        {"snapshots", sol.profiles().size()}};
    if (r.variant.kind == NonlocalVariant::Kind::modified)
        j["beta"] = r.variant.beta;
    else
        j["c1"] = r.variant.c1;
    return j;
}

nlohmann::json to_json(const RunMeta& meta) {
    return {{"solver", meta.solver}, {"eps", meta.eps},   {"dx", meta.dx},
            {"dt", meta.dt},         {"nodes", meta.nodes}, {"variant", meta.variant}};
}

nlohmann::json to_json(const ErrorReport& report) {
    nlohmann::json per_time = nlohmann::json::array();
    for (const auto& [t, e] : report.per_time_sup) per_time.push_back({t, e});
    return {{"overall_sup", report.overall_sup},
            {"boundary_sup", {{"g", report.boundary_sup.first}, {"h", report.boundary_sup.second}}},
            {"per_time_sup", per_time},
            {"meta", {{"a", to_json(report.meta_a)}, {"b", to_json(report.meta_b)}}}};
}

nlohmann::json to_json(const RateFit& fit) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [eps, err] : fit.pairs) pairs.push_back({eps, err});
    return {{"gamma_hat", fit.gamma_hat}, {"r_squared", fit.r_squared}, {"pairs", pairs}};
}

nlohmann::json to_json(const SandwichReport& report) {
    return {{"ok", report.ok},
            {"max_violation", report.max_violation},
            {"violations", report.violations},
            {"where", {{"t", report.where_t}, {"x", report.where_x}, {"relation", report.where}}},
            {"tolerance", {{"value", report.tol.value}, {"domain", report.tol.domain}}}};
}

std::string rate_csv(const RateFit& fit) {
    std::string out = "eps,error\n";
    for (const auto& [eps, err] : fit.pairs) out += format_real(eps) + ',' + format_real(err) + '\n';
    return out;
}

std::vector<std::pair<double, double>> parse_rate_csv(std::string_view text) {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : parse_rows(text, "eps,error", 2)) out.emplace_back(r[0], r[1]);
    return out;
}

nlohmann::json error_json(const Error& error) {
    nlohmann::json j = {{"code", std::string(to_string(error.code()))}, {"message", error.what()}};
    if (auto t = error.time_of_failure())
        j["time_of_failure"] = *t;
    else
        j["time_of_failure"] = nullptr;
    return j;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot rename onto " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_solution(const std::filesystem::path& dir, const Trajectory& sol, const nlohmann::json& meta) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    write_atomic(dir / "boundary.csv", boundary_csv(sol));
    const auto profiles = sol.profiles();
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%03zu.csv", k);
        write_atomic(dir / name, snapshot_csv(profiles[k]));
    }
    nlohmann::json m = meta;
    nlohmann::json times = nlohmann::json::array();
    for (const Profile& p : profiles) times.push_back(p.t);
    m["snapshot_times"] = times;
    write_atomic(dir / "metadata.json", m.dump(2) + "\n");
}

} // namespace fbp::io
