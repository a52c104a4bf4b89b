#include "fbplab/analysis.hpp"

#include "fbplab/errors.hpp"
#include "fbplab/local_fbp.hpp"
#include "fbplab/nonlocal_fbp.hpp"

#include <algorithm>
#include <cmath>

namespace fbp {

namespace {

constexpr double horizon_tolerance = 1e-12;

void check_lattice(int time_samples, int space_samples) {
    if (time_samples < 1 || space_samples < 1)
        throw Error(ErrorCode::InvalidArgument, "sampling lattice needs at least one interval per axis");
}

double lattice_time(double T, int k, int time_samples) {
    return k == time_samples ? T : T * static_cast<double>(k) / time_samples;
}

std::pair<double, double> union_extent(std::initializer_list<const Trajectory*> runs) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const Trajectory* r : runs) {
        const auto [g, h] = r->extent();
        lo = first ? g : std::min(lo, g);
        hi = first ? h : std::max(hi, h);
        first = false;
    }
    return {lo, hi};
}

double lattice_x(double lo, double hi, int j, int space_samples) {
    return j == space_samples ? hi : lo + (hi - lo) * static_cast<double>(j) / space_samples;
}

void require_same_horizon(const Trajectory& a, const Trajectory& b) {
    if (std::abs(a.horizon() - b.horizon()) > horizon_tolerance * std::max(1.0, a.horizon()))
        throw Error(ErrorCode::HorizonMismatch, "solutions have different horizons");
}

} // namespace

RunMeta meta_of(const LocalSolution& sol) {
    RunMeta m;
    m.solver = "local";
    m.nodes = sol.resolution().N;
    m.dt = sol.resolution().dt;
    if (!sol.snapshots().empty()) {
        const auto& s = sol.snapshots().front();
        m.dx = (s.h - s.g) / s.nodes();
    }
    m.eps = sol.knobs().eps;
    return m;
}

RunMeta meta_of(const NonlocalSolution& sol) {
    RunMeta m;
    m.solver = "nonlocal";
    m.eps = sol.resolution().eps;
    m.dx = sol.resolution().dx;
    m.dt = sol.resolution().dt;
    m.variant = sol.resolution().variant.describe();
    return m;
}

ErrorReport sup_error(const Trajectory& a, const Trajectory& b, int time_samples, int space_samples) {
    require_same_horizon(a, b);
    check_lattice(time_samples, space_samples);

    ErrorReport report;
    const double T = a.horizon();
    const auto [lo, hi] = union_extent({&a, &b});
    report.per_time_sup.reserve(static_cast<std::size_t>(time_samples) + 1);
    for (int k = 0; k <= time_samples; ++k) {
        const double t = lattice_time(T, k, time_samples);
        double sup = 0.0;
        for (int j = 0; j <= space_samples; ++j) {
            const double x = lattice_x(lo, hi, j, space_samples);
            sup = std::max(sup, std::abs(a.sample(t, x) - b.sample(t, x)));
        }
        report.per_time_sup.emplace_back(t, sup);
        report.overall_sup = std::max(report.overall_sup, sup);
    }

    auto accumulate = [&report](const Trajectory& dense, const Trajectory& other) {
        for (const BoundarySample& s : dense.boundary()) {
            const auto [g, h] = other.boundary_at(s.t);
            report.boundary_sup.first = std::max(report.boundary_sup.first, std::abs(s.g - g));
            report.boundary_sup.second = std::max(report.boundary_sup.second, std::abs(s.h - h));
        }
    };
    accumulate(a, b);
    accumulate(b, a);
    return report;
}

RateFit fit_rate(std::vector<std::pair<double, double>> pairs) {
    if (pairs.size() < 3) throw Error(ErrorCode::DegenerateFit, "rate fit needs at least 3 (eps, error) pairs");
    for (const auto& [eps, err] : pairs) {
        if (!(eps > 0.0)) throw Error(ErrorCode::DegenerateFit, "rate fit needs positive eps");
        if (!(err > 0.0)) throw Error(ErrorCode::DegenerateFit, "error at or below zero; refine or drop the pair");
    }
    std::vector<double> eps_sorted;
    for (const auto& p : pairs) eps_sorted.push_back(p.first);
    std::sort(eps_sorted.begin(), eps_sorted.end());
    if (std::adjacent_find(eps_sorted.begin(), eps_sorted.end()) != eps_sorted.end())
        throw Error(ErrorCode::DegenerateFit, "rate fit needs distinct eps");

    const double n = static_cast<double>(pairs.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [eps, err] : pairs) {
        mx += std::log(eps);
        my += std::log(err);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [eps, err] : pairs) {
        const double dx = std::log(eps) - mx;
        const double dy = std::log(err) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    RateFit fit;
    fit.pairs = std::move(pairs);
    fit.gamma_hat = sxy / sxx;
    const double ss_res = std::max(0.0, syy - fit.gamma_hat * sxy);
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

std::vector<std::pair<double, double>> mass_residual(const Trajectory& sol, const ProblemConfig& config,
                                                     double coefficient) {
    std::vector<std::pair<double, double>> out;
    const auto profiles = sol.profiles();
    if (profiles.empty()) return out;
    const double m0 = profiles.front().mass();
    out.reserve(profiles.size());
    for (const Profile& p : profiles) {
        const double r = (p.mass() - m0) + coefficient * (p.h - p.g - 2.0 * config.h0) - p.reaction_integral;
        out.emplace_back(p.t, r);
    }
    return out;
}

double max_abs_residual(const std::vector<std::pair<double, double>>& residual) {
    double m = 0.0;
    for (const auto& [t, r] : residual) m = std::max(m, std::abs(r));
    return m;
}

SandwichReport sandwich_check(const Trajectory& lower, const Trajectory& mid, const Trajectory& upper,
                              SandwichTolerance tol, int time_samples, int space_samples) {
    require_same_horizon(lower, mid);
    require_same_horizon(mid, upper);
    check_lattice(time_samples, space_samples);

    SandwichReport report;
    report.tol = tol;
    auto record = [&report](double excess, double t, double x, const char* what) {
        if (excess <= 0.0) return;
        ++report.violations;
        report.ok = false;
        if (excess > report.max_violation) {
            report.max_violation = excess;
            report.where_t = t;
            report.where_x = x;
            report.where = what;
        }
    };

    for (const BoundarySample& s : mid.boundary()) {
        const auto [gl, hl] = lower.boundary_at(s.t);
        const auto [gu, hu] = upper.boundary_at(s.t);
        record(s.g - gl - tol.domain, s.t, s.g, "g_lower < g_mid");
        record(hl - s.h - tol.domain, s.t, s.h, "h_lower > h_mid");
        record(gu - s.g - tol.domain, s.t, s.g, "g_mid < g_upper");
        record(s.h - hu - tol.domain, s.t, s.h, "h_mid > h_upper");
    }

    const double T = mid.horizon();
    const auto [lo, hi] = union_extent({&lower, &mid, &upper});
    for (int k = 0; k <= time_samples; ++k) {
        const double t = lattice_time(T, k, time_samples);
        for (int j = 0; j <= space_samples; ++j) {
            const double x = lattice_x(lo, hi, j, space_samples);
            const double m = mid.sample(t, x);
            record(lower.sample(t, x) - m - tol.value, t, x, "lower > mid");
            record(m - upper.sample(t, x) - tol.value, t, x, "mid > upper");
        }
    }
    return report;
}

double symmetry_defect(const Trajectory& sol, int time_samples, int space_samples) {
    check_lattice(time_samples, space_samples);
    double boundary = 0.0;
    for (const BoundarySample& s : sol.boundary()) boundary = std::max(boundary, std::abs(s.g + s.h));

    const auto [g, h] = sol.extent();
    const double reach = std::max(std::abs(g), std::abs(h));
    const double T = sol.horizon();
    double values = 0.0;
    for (int k = 0; k <= time_samples; ++k) {
        const double t = lattice_time(T, k, time_samples);
        for (int j = 0; j <= space_samples; ++j) {
            const double x = reach * static_cast<double>(j) / space_samples;
            values = std::max(values, std::abs(sol.sample(t, x) - sol.sample(t, -x)));
        }
    }
    return values + boundary;
}

} // namespace fbp
