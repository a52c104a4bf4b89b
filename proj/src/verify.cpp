#include "fbplab/verify.hpp"

#include "fbplab/analysis.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/kernel.hpp"
#include "fbplab/local_fbp.hpp"
#include "fbplab/nonlocal_fbp.hpp"
#include "fbplab/problem.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

namespace fbp::verify {

namespace {

struct Outcome {
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

Outcome at_most(double value, double threshold, std::string detail = {}) {
    return {value <= threshold, value, threshold, std::move(detail)};
}

Outcome at_least(double value, double threshold, std::string detail = {}) {
    return {value >= threshold, value, threshold, std::move(detail)};
}

class Recorder {
public:
    Recorder(std::vector<CheckResult>& out, std::string suite) : out_(out), suite_(std::move(suite)) {}

    void operator()(const std::string& name, const std::function<Outcome()>& check) {
        CheckResult r;
        r.suite = suite_;
        r.name = name;
        try {
            Outcome o = check();
            r.passed = o.passed;
            r.value = o.value;
            r.threshold = o.threshold;
            r.detail = std::move(o.detail);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("threw: ") + e.what();
        }
        out_.push_back(std::move(r));
    }

private:
    std::vector<CheckResult>& out_;
    std::string suite_;
};

ValidatedConfig stefan_config(ReactionSpec reaction = ReactionSpec::zero()) {
    ProblemConfig c;
    c.reaction = reaction;
    c.initial = InitialDataSpec::quadratic_bump(1.0, 1.0);
    return validate_or_throw(c);
}

// Nodes of (-L, L) on the grid x_i = i dx filled with `u`.
EulerianState test_state(double dx, double L, double margin, const std::function<double(double)>& u) {
    EulerianState s;
    s.dx = dx;
    s.g = -L;
    s.h = L;
    const long n = static_cast<long>(std::ceil((L + margin) / dx)) + 2;
    s.first_index = -n;
    s.values.assign(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double x = s.x(i);
        if (x > s.g && x < s.h) s.values[i] = u(x);
    }
    return s;
}

// sup over nodes whose full window lies inside (g, h) of |L u / d - u_xx| / scale.
double consistency_error(const Kernel& k, double eps, int ratio, const std::function<double(double)>& u,
                         const std::function<double(double)>& uxx) {
    const EulerianState s = test_state(eps / ratio, 1.0, 2.0 * eps, u);
    const std::vector<double> Lu = apply_nonlocal_operator(s, k, eps, 1.0);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double x = s.x(i);
        if (x - eps <= s.g || x + eps >= s.h) continue;
        err = std::max(err, std::abs(Lu[i] - uxx(x)));
        scale = std::max(scale, std::abs(uxx(x)));
    }
    return err / scale;
}

bool strictly_monotone(const Trajectory& sol) {
    const auto b = sol.boundary();
    for (std::size_t i = 1; i < b.size(); ++i)
        if (!(b[i].h > b[i - 1].h) || !(b[i].g < b[i - 1].g)) return false;
    return true;
}

double min_value(const Trajectory& sol) {
    double m = 0.0;
    for (const Profile& p : sol.profiles())
        for (double v : p.v) m = std::min(m, v);
    return m;
}

// Manufactured v* = e^{-t} cos(pi x / 2) on frozen [-1, 1]; returns the sup error at t = 1/2.
double mms_error(int N) {
    const double d = 1.0;
    const double k2 = 0.25 * std::numbers::pi * std::numbers::pi;
    auto exact = [](double t, double x) { return std::exp(-t) * std::cos(0.5 * std::numbers::pi * x); };
    auto source = [&](double t, double x, double) { return (d * k2 - 1.0) * exact(t, x); };

    FixedDomainState s;
    s.g = -1.0;
    s.h = 1.0;
    s.values.resize(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) s.values[j] = exact(0.0, -1.0 + 2.0 * j / N);
    s.values.front() = s.values.back() = 0.0;
    const double T = 0.5;
    const int steps = 4 * N;
    const double dt = T / steps;
    for (int n = 0; n < steps; ++n) s = imex_advance(s, dt, d, 0.0, 0.0, source);
    double err = 0.0;
    for (int j = 0; j <= N; ++j) err = std::max(err, std::abs(s.values[j] - exact(T, -1.0 + 2.0 * j / N)));
    return err;
}

void kernel_suite(std::vector<CheckResult>& out) {
    Recorder check(out, "kernel");
    const Kernel epa = Kernel::epanechnikov();
    const Kernel tri = Kernel::triangle();
    const Kernel qua = Kernel::quartic();
    check("c_star(epanechnikov) = 10", [&] { return at_most(std::abs(epa.c_star() - 10.0), 1e-10); });
    check("c_zero(epanechnikov) = 16/3", [&] { return at_most(std::abs(epa.c_zero() - 16.0 / 3.0), 1e-10); });
    check("c_star(triangle) = 12", [&] { return at_most(std::abs(tri.c_star() - 12.0), 1e-10); });
    check("c_zero(triangle) = 6", [&] { return at_most(std::abs(tri.c_zero() - 6.0), 1e-10); });
    check("c_star(quartic) = 14", [&] { return at_most(std::abs(qua.c_star() - 14.0), 1e-10); });
    for (const Kernel* k : {&epa, &tri, &qua}) {
        check("c_zero < c_star (" + k->name() + ")",
              [k] { return Outcome{k->c_zero() < k->c_star(), k->c_zero(), k->c_star(), {}}; });
        check("half mass (" + k->name() + ")", [k] { return at_most(std::abs(k->moment(0) - 0.5), 1e-10); });
        check("c_zero * int W = 1 (" + k->name() + ")", [k] {
            // Composite Simpson on 2000 panels; W is a piecewise polynomial.
            const int n = 2000;
            double s = k->boundary_weight(0.0) + k->boundary_weight(1.0);
            for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * k->boundary_weight(static_cast<double>(i) / n);
            return at_most(std::abs(s / (3.0 * n) * k->c_zero() - 1.0), 1e-8);
        });
        check("W nonincreasing (" + k->name() + ")", [k] {
            double worst = 0.0;
            double prev = k->boundary_weight(0.0);
            for (int i = 1; i <= 1000; ++i) {
                const double w = k->boundary_weight(i / 1000.0);
                worst = std::max(worst, w - prev);
                prev = w;
            }
            return at_most(worst, 0.0);
        });
    }
}

void local_suite(std::vector<CheckResult>& out) {
    Recorder check(out, "local");
    const ValidatedConfig cfg = stefan_config();
    const LocalSolution base = solve_local(cfg, PerturbationKnobs::inert(), 256, 1e-3);
    check("symmetry sup|g+h|", [&] {
        double m = 0.0;
        for (const auto& b : base.boundary()) m = std::max(m, std::abs(b.g + b.h));
        return at_most(m, 1e-10);
    });
    check("symmetry_defect", [&] { return at_most(symmetry_defect(base), 1e-10); });
    check("g decreasing, h increasing", [&] { return Outcome{strictly_monotone(base), 0.0, 0.0, {}}; });
    check("positivity", [&] { return at_least(min_value(base), 0.0); });
    check("eps = 0 knobs reproduce inert run", [&] {
        const LocalSolution zero = solve_local(cfg, PerturbationKnobs::upper(0.0, 0.4), 256, 1e-3);
        bool same = zero.boundary().size() == base.boundary().size();
        for (std::size_t i = 0; same && i < zero.boundary().size(); ++i)
            same = zero.boundary()[i].h == base.boundary()[i].h && zero.boundary()[i].g == base.boundary()[i].g;
        for (std::size_t i = 0; same && i < zero.profiles().size(); ++i)
            same = zero.profiles()[i].v == base.profiles()[i].v;
        return Outcome{same, 0.0, 0.0, "bitwise"};
    });
    check("comparison in mu", [&] {
        ProblemConfig c = cfg.config();
        c.mu = 0.5;
        const LocalSolution slow = solve_local(validate_or_throw(c), PerturbationKnobs::inert(), 256, 1e-3);
        double worst = -1e300;
        for (std::size_t i = 0; i < slow.profiles().size(); ++i)
            worst = std::max(worst, slow.profiles()[i].h - base.profiles()[i].h);
        return at_most(worst, 10.0 * base.resolution().dt);
    });
    check("manufactured solution order", [&] {
        double prev = mms_error(16), order = 0.0;
        for (int N = 32; N <= 256; N *= 2) {
            const double e = mms_error(N);
            order = std::log2(prev / e);
            prev = e;
        }
        return at_least(order, 1.8, "last of four halvings");
    });
}

void nonlocal_suite(std::vector<CheckResult>& out) {
    Recorder check(out, "nonlocal");
    const Kernel k = Kernel::epanechnikov();
    auto sq = [](double x) { return x * x; };
    auto two = [](double) { return 2.0; };
    auto sn = [](double x) { return std::sin(x); };
    auto msn = [](double x) { return -std::sin(x); };
    check("consistency x^2, eps = 0.1", [&] { return at_most(consistency_error(k, 0.1, 32, sq, two), 0.02); });
    check("consistency sin, eps = 0.1", [&] { return at_most(consistency_error(k, 0.1, 32, sn, msn), 0.02); });
    check("consistency sin shrinks with eps", [&] {
        const double a = consistency_error(k, 0.1, 32, sn, msn);
        const double b = consistency_error(k, 0.05, 32, sn, msn);
        return at_most(b, a, "eps = 0.05 against eps = 0.1");
    });

    const double eps = 0.1;
    // Boundaries a sliver beyond the outermost nodes, so u = 1 on [h - eps, h) up to 1e-9.
    const EulerianState flat = test_state(eps / 16, 1.0 + 1e-9, 4.0 * eps, [](double) { return 1.0; });
    check("constant-profile flux, modified", [&] {
        const double h_dot = boundary_flux(flat, k, eps, 1.0, NonlocalVariant::modified(0.5), Side::right);
        return at_most(std::abs(h_dot / std::pow(eps, -0.5) - 1.0), 1e-6);
    });
    check("constant-profile flux, unmodified", [&] {
        const double h_dot = boundary_flux(flat, k, eps, 1.0, NonlocalVariant::unmodified(k.c_star()), Side::right);
        return at_most(std::abs(h_dot / (k.c_star() / (k.c_zero() * eps)) - 1.0), 1e-6);
    });

    const ValidatedConfig cfg = stefan_config();
    const NonlocalSolution run = solve_nonlocal(cfg, k, eps, NonlocalVariant::modified(0.5), eps / 8, 0.0);
    check("symmetry_defect", [&] { return at_most(symmetry_defect(run), 1e-10); });
    check("positivity", [&] { return at_least(min_value(run), 0.0); });
    check("g nonincreasing, h nondecreasing", [&] {
        const auto b = run.boundary();
        bool ok = true;
        for (std::size_t i = 1; i < b.size(); ++i) ok = ok && b[i].h >= b[i - 1].h && b[i].g <= b[i - 1].g;
        return Outcome{ok, 0.0, 0.0, {}};
    });
    check("discrete comparison", [&] {
        ProblemConfig c = cfg.config();
        c.initial = InitialDataSpec::quadratic_bump(1.2, 1.0);
        const NonlocalSolution big =
            solve_nonlocal(validate_or_throw(c), k, eps, NonlocalVariant::modified(0.5), eps / 8, 0.0);
        const SandwichReport r = sandwich_check(run, run, big, 1e-8);
        return Outcome{r.ok, r.max_violation, 1e-8, r.where};
    });
}

void sandwich_suite(std::vector<CheckResult>& out) {
    Recorder check(out, "sandwich");
    const double eps = 0.05, gamma1 = 0.4;
    const ValidatedConfig cfg = stefan_config();
    const LocalSolution lo = solve_local(cfg, PerturbationKnobs::lower(eps, gamma1), 2048, 2e-5);
    const LocalSolution mid = solve_local(cfg, PerturbationKnobs::inert(), 2048, 2e-5);
    const LocalSolution up = solve_local(cfg, PerturbationKnobs::upper(eps, gamma1), 2048, 2e-5);
    check("perturbed local ordering", [&] {
        const SandwichReport r = sandwich_check(lo, mid, up, 1e-6);
        return Outcome{r.ok, r.max_violation, 1e-6, r.where};
    });

    const double slack = 10.0 * std::pow(eps, gamma1) * cfg.sup_v0();
    const NonlocalSolution nl =
        solve_nonlocal(cfg, Kernel::epanechnikov(), eps, NonlocalVariant::modified(0.5), eps / 8, 0.0);
    check("nonlocal between perturbed local runs", [&] {
        const SandwichReport r = sandwich_check(lo, nl, up, SandwichTolerance{slack, 1e-6});
        return Outcome{r.ok, static_cast<double>(r.violations), 0.0, "lattice violations"};
    });
}

void mass_suite(std::vector<CheckResult>& out) {
    Recorder check(out, "mass");
    const ValidatedConfig cfg = stefan_config();
    const double coef = cfg->d / cfg->mu;
    const LocalSolution coarse = solve_local(cfg, PerturbationKnobs::inert(), 256, 2e-4);
    const LocalSolution fine = solve_local(cfg, PerturbationKnobs::inert(), 512, 1e-4);
    const double rc = max_abs_residual(mass_residual(coarse, cfg.config(), coef));
    const double rf = max_abs_residual(mass_residual(fine, cfg.config(), coef));
    const double m0 = fine.profiles().front().mass();
    check("local residual at N = 512", [&] { return at_most(rf, 1e-3 * m0); });
    check("local residual decays under refinement", [&] { return at_least(rc / rf, 3.0); });
    check("residual(0) = 0", [&] { return at_most(std::abs(mass_residual(fine, cfg.config(), coef).front().second), 0.0); });

    const ValidatedConfig fkpp = stefan_config(ReactionSpec::fisher_kpp(1.0, 1.0));
    check("local residual with reaction", [&] {
        const LocalSolution s = solve_local(fkpp, PerturbationKnobs::inert(), 512, 1e-4);
        return at_most(max_abs_residual(mass_residual(s, fkpp.config(), coef)), 1e-3 * m0);
    });

    const Kernel k = Kernel::epanechnikov();
    const double eps = 0.05;
    auto unmodified = [&](double c1, int ratio) {
        const NonlocalSolution s =
            solve_nonlocal(cfg, k, eps, NonlocalVariant::unmodified(c1), eps / ratio, 0.0);
        return max_abs_residual(mass_residual(s, cfg.config(), coef));
    };
    const double r_cs = unmodified(k.c_star(), 8);
    check("unmodified c1 = C*/2 residual ratio", [&] { return at_least(unmodified(0.5 * k.c_star(), 8) / r_cs, 5.0); });
    check("unmodified c1 = C* residual decays with dx", [&] { return at_most(unmodified(k.c_star(), 16), r_cs); });
}

} // namespace

Suite parse_suite(std::string_view name) {
    for (Suite s : {Suite::kernel, Suite::local, Suite::nonlocal, Suite::sandwich, Suite::mass, Suite::all})
        if (to_string(s) == name) return s;
    throw Error(ErrorCode::InvalidArgument, "unknown verify suite '" + std::string(name) + "'");
}

std::string_view to_string(Suite suite) noexcept {
    switch (suite) {
    case Suite::kernel: return "kernel";
    case Suite::local: return "local";
    case Suite::nonlocal: return "nonlocal";
    case Suite::sandwich: return "sandwich";
    case Suite::mass: return "mass";
    case Suite::all: return "all";
    }
    return "unknown";
}

std::vector<CheckResult> run_suite(Suite suite) {
    std::vector<CheckResult> out;
    const bool all = suite == Suite::all;
    if (all || suite == Suite::kernel) kernel_suite(out);
    if (all || suite == Suite::local) local_suite(out);
    if (all || suite == Suite::nonlocal) nonlocal_suite(out);
    if (all || suite == Suite::sandwich) sandwich_suite(out);
    if (all || suite == Suite::mass) mass_suite(out);
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) noexcept {
    for (const auto& r : results)
        if (!r.passed) return false;
    return !results.empty();
}

std::string format_table(const std::vector<CheckResult>& results) {
    std::string out;
    char line[256];
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%-4s  %-9s %-44s value=%-12.4g bound=%-12.4g %s\n", r.passed ? "PASS" : "FAIL",
                      r.suite.c_str(), r.name.c_str(), r.value, r.threshold, r.detail.c_str());
        out += line;
    }
    return out;
}

} // namespace fbp::verify
