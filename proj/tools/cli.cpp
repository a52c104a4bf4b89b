#include "cli.hpp"

#include "fbplab/analysis.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/io.hpp"
#include "fbplab/kernel.hpp"
#include "fbplab/local_fbp.hpp"
#include "fbplab/nonlocal_fbp.hpp"
#include "fbplab/problem.hpp"
#include "fbplab/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fbp::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
    std::string config;
    std::string solver = "local";
    std::vector<double> eps;
    double beta = 0.5;
    std::optional<double> c1;
    std::string preset = "none";
    double gamma1 = 0.4;
    std::string out = "fbplab_out";
    int nx = 0;
    double dt = 0.0;
    std::string kernel = "epanechnikov";
    int ref_nx = 2048;
    double ref_dt = 0.0;
    int intervals = 64;
    std::string suite = "all";
};

constexpr int default_local_nodes = 512;
constexpr double default_local_dt = 1e-4;
constexpr double reference_steps = 1048576.0; // 2^20

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidConfig:
    case ErrorCode::IoError: return exit_invalid_input;
    default: return exit_solver_error;
    }
}

int report_error(const Error& e, const Options& o, std::ostream& err) {
    const json j = io::error_json(e);
    err << j.dump() << "\n";
    try {
        fs::create_directories(o.out);
        io::write_atomic(fs::path(o.out) / "error.json", j.dump(2) + "\n");
    } catch (...) {
        // The error already went to stderr.
    }
    return exit_code_for(e);
}

// Loads and validates; on violations writes them out and returns nullopt.
std::optional<ValidatedConfig> load_config(const Options& o, std::ostream& err) {
    const ProblemConfig cfg = load_problem(o.config);
    ValidationResult r = validate(cfg);
    if (r.ok()) return std::move(r.value);
    json list = json::array();
    for (const Violation& v : r.violations) list.push_back({{"hypothesis", v.hypothesis}, {"message", v.message}});
    const json j = {{"code", "InvalidConfig"}, {"violations", list}};
    err << j.dump() << "\n";
    fs::create_directories(o.out);
    io::write_atomic(fs::path(o.out) / "violations.json", j.dump(2) + "\n");
    return std::nullopt;
}

NonlocalVariant variant_of(const Options& o) {
    return o.c1 ? NonlocalVariant::unmodified(*o.c1) : NonlocalVariant::modified(o.beta);
}

json manifest_of(const Options& o, const std::string& command) {
    json m = {{"command", command}, {"config", o.config},   {"solver", o.solver}, {"eps", o.eps},
              {"beta", o.beta},     {"preset", o.preset},   {"gamma1", o.gamma1}, {"nx", o.nx},
              {"dt", o.dt},         {"kernel", o.kernel},   {"intervals", o.intervals}};
    if (o.c1) m["c1"] = *o.c1;
    if (command == "converge") {
        m["ref_nx"] = o.ref_nx;
        m["ref_dt"] = o.ref_dt;
    }
    return m;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    const auto cfg = load_config(o, err);
    if (!cfg) return exit_invalid_input;
    const OutputSchedule schedule{o.intervals};

    if (o.solver == "local") {
        PerturbationKnobs knobs = PerturbationKnobs::inert();
        if (o.preset != "none") {
            if (o.eps.size() != 1) throw Error(ErrorCode::InvalidArgument, "--preset needs exactly one --eps");
            knobs = o.preset == "i1" ? PerturbationKnobs::upper(o.eps[0], o.gamma1)
                                     : PerturbationKnobs::lower(o.eps[0], o.gamma1);
        }
        const int N = o.nx > 0 ? o.nx : default_local_nodes;
        const double dt = o.dt > 0.0 ? o.dt : default_local_dt;
        const LocalSolution sol = solve_local(*cfg, knobs, N, dt, schedule);
        json meta = io::metadata(sol);
        meta["manifest"] = manifest_of(o, "solve");
        io::write_solution(o.out, sol, meta);
        out << "local solve: N=" << N << " h(T)=" << io::format_real(sol.boundary().back().h)
            << " g(T)=" << io::format_real(sol.boundary().back().g) << "\n";
        return exit_ok;
    }

    if (o.eps.size() != 1) throw Error(ErrorCode::InvalidArgument, "nonlocal solve needs exactly one --eps");
    const double eps = o.eps[0];
    const Kernel kernel = Kernel::by_name(o.kernel);
    const int per_eps = o.nx > 0 ? o.nx : default_nodes_per_eps;
    const NonlocalSolution sol = solve_nonlocal(*cfg, kernel, eps, variant_of(o), eps / per_eps, o.dt, schedule);
    json meta = io::metadata(sol);
    meta["manifest"] = manifest_of(o, "solve");
    io::write_solution(o.out, sol, meta);
    out << "nonlocal solve: eps=" << eps << " h(T)=" << io::format_real(sol.boundary().back().h)
        << " g(T)=" << io::format_real(sol.boundary().back().g) << "\n";
    return exit_ok;
}

struct SweepEntry {
    double eps = 0.0;
    ErrorReport report;
};

int cmd_converge(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.eps.size() < 3) {
        err << "converge needs at least 3 --eps values for a rate fit (got " << o.eps.size() << ")\n";
        return exit_invalid_input;
    }
    const auto cfg = load_config(o, err);
    if (!cfg) return exit_invalid_input;
    const OutputSchedule schedule{o.intervals};
    const Kernel kernel = Kernel::by_name(o.kernel);
    const NonlocalVariant variant = variant_of(o);
    variant.check();

    const double ref_dt = o.ref_dt > 0.0 ? o.ref_dt : (*cfg)->T / reference_steps;
    const LocalSolution reference = solve_local(*cfg, PerturbationKnobs::inert(), o.ref_nx, ref_dt, schedule);
    const int per_eps = o.nx > 0 ? o.nx : default_nodes_per_eps;

    // Independent runs, one task per eps; results are collected in input order.
    std::vector<std::future<SweepEntry>> tasks;
    for (double eps : o.eps) {
        tasks.push_back(std::async(std::launch::async, [&, eps] {
            const NonlocalSolution sol = solve_nonlocal(*cfg, kernel, eps, variant, eps / per_eps, o.dt, schedule);
            SweepEntry e{eps, sup_error(sol, reference)};
            e.report.meta_a = meta_of(sol);
            e.report.meta_b = meta_of(reference);
            return e;
        }));
    }
    std::vector<SweepEntry> entries;
    for (auto& t : tasks) entries.push_back(t.get());

    fs::create_directories(o.out);
    std::string table = "eps,sup_error,g_error,h_error\n";
    std::vector<std::pair<double, double>> sol_pairs, g_pairs, h_pairs;
    json reports = json::array();
    for (const SweepEntry& e : entries) {
        table += io::format_real(e.eps) + ',' + io::format_real(e.report.overall_sup) + ',' +
                 io::format_real(e.report.boundary_sup.first) + ',' + io::format_real(e.report.boundary_sup.second) +
                 '\n';
        sol_pairs.emplace_back(e.eps, e.report.overall_sup);
        g_pairs.emplace_back(e.eps, e.report.boundary_sup.first);
        h_pairs.emplace_back(e.eps, e.report.boundary_sup.second);
        json r = io::to_json(e.report);
        r["eps"] = e.eps;
        reports.push_back(std::move(r));
    }
    io::write_atomic(fs::path(o.out) / "converge.csv", table);
    io::write_atomic(fs::path(o.out) / "error_reports.json", reports.dump(2) + "\n");

    const RateFit f_sol = fit_rate(sol_pairs);
    const RateFit f_g = fit_rate(g_pairs);
    const RateFit f_h = fit_rate(h_pairs);
    const json rates = {{"solution", io::to_json(f_sol)},
                        {"boundary_g", io::to_json(f_g)},
                        {"boundary_h", io::to_json(f_h)},
                        {"reference", {{"N", reference.resolution().N}, {"dt", reference.resolution().dt}}},
                        {"manifest", manifest_of(o, "converge")}};
    io::write_atomic(fs::path(o.out) / "rate.json", rates.dump(2) + "\n");
    io::write_atomic(fs::path(o.out) / "rate_solution.csv", io::rate_csv(f_sol));
    io::write_atomic(fs::path(o.out) / "rate_boundary_g.csv", io::rate_csv(f_g));
    io::write_atomic(fs::path(o.out) / "rate_boundary_h.csv", io::rate_csv(f_h));

    out << table;
    out << "gamma_hat solution=" << f_sol.gamma_hat << " (r2=" << f_sol.r_squared << ")"
        << " g=" << f_g.gamma_hat << " (r2=" << f_g.r_squared << ")"
        << " h=" << f_h.gamma_hat << " (r2=" << f_h.r_squared << ")\n";
    return exit_ok;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const auto results = verify::run_suite(verify::parse_suite(o.suite));
    out << verify::format_table(results);
    const bool ok = verify::all_passed(results);
    out << (ok ? "all checks passed\n" : "some checks failed\n");
    return ok ? exit_ok : exit_failed_checks;
}

void add_solver_flags(CLI::App& cmd, Options& o) {
    cmd.add_option("--config", o.config, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
    cmd.add_option("--eps", o.eps, "Kernel scale; repeat for sweeps")->take_all();
    cmd.add_option("--beta", o.beta, "Offset exponent of the modified flux law")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--c1", o.c1, "Use the unmodified flux law with this coefficient");
    cmd.add_option("--kernel", o.kernel, "epanechnikov, triangle, quartic or a two-column table file");
    cmd.add_option("--out", o.out, "Output directory");
    cmd.add_option("--nx", o.nx, "Local: node count N. Nonlocal: nodes per eps (dx = eps / nx)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--dt", o.dt, "Time step upper bound (0 selects the default)")->check(CLI::NonNegativeNumber);
    cmd.add_option("--intervals", o.intervals, "Snapshot intervals over [0, T]")->check(CLI::PositiveNumber);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local and nonlocal free boundary problem laboratory", "fbplab"};
    app.require_subcommand(1);
    Options o;

    CLI::App* solve = app.add_subcommand("solve", "Single solve; writes boundary/snapshot CSVs and metadata");
    add_solver_flags(*solve, o);
    solve->add_option("--solver", o.solver)->check(CLI::IsMember({"local", "nonlocal"}));
    solve->add_option("--preset", o.preset, "Perturbation preset for the local solver")
        ->check(CLI::IsMember({"i1", "i2", "none"}));
    solve->add_option("--gamma1", o.gamma1, "Perturbation exponent in (0, 1/2)");

    CLI::App* converge = app.add_subcommand("converge", "Nonlocal eps-sweep against a local reference");
    add_solver_flags(*converge, o);
    converge->add_option("--ref-nx", o.ref_nx, "Reference node count")->check(CLI::Range(32, 1 << 20));
    converge->add_option("--ref-dt", o.ref_dt, "Reference step (0 selects T / 2^20)")
        ->check(CLI::NonNegativeNumber);

    CLI::App* verify_cmd = app.add_subcommand("verify", "Property suites at desk-scale resolution");
    verify_cmd->add_option("--verify,suite", o.suite, "kernel, local, nonlocal, sandwich, mass or all")
        ->check(CLI::IsMember({"kernel", "local", "nonlocal", "sandwich", "mass", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid_input;
    }

    try {
        if (solve->parsed()) return cmd_solve(o, out, err);
        if (converge->parsed()) return cmd_converge(o, out, err);
        return cmd_verify(o, out);
    } catch (const Error& e) {
        return report_error(e, o, err);
    } catch (const std::exception& e) {
        return report_error(Error(ErrorCode::IoError, e.what()), o, err);
    }
}

} // namespace fbp::cli
