#pragma once

#include "fbplab/problem.hpp"
#include "fbplab/trajectory.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fbp {

class LocalSolution;
class NonlocalSolution;

/// Resolution summary of one run, carried along in reports.
struct RunMeta {
    std::string solver; ///< "local", "nonlocal" or empty when unknown
    double eps = 0.0;
    double dx = 0.0;
    double dt = 0.0;
    int nodes = 0;
    std::string variant;
};

RunMeta meta_of(const LocalSolution& sol);
RunMeta meta_of(const NonlocalSolution& sol);

struct ErrorReport {
    std::vector<std::pair<double, double>> per_time_sup; ///< (t, sup_x |a - b|)
    double overall_sup = 0.0;
    std::pair<double, double> boundary_sup{0.0, 0.0}; ///< (sup |g_a - g_b|, sup |h_a - h_b|)
    RunMeta meta_a;
    RunMeta meta_b;
};

/// Sup distance between two zero-extended trajectories on the lattice
/// t_k = k T / time_samples (k = 0..time_samples) times space_samples + 1
/// uniform points spanning the union of both maximal domains. Boundary
/// deviations are taken over every dense boundary sample of either run.
ErrorReport sup_error(const Trajectory& a, const Trajectory& b, int time_samples = 64,
                      int space_samples = 1024);

struct RateFit {
    std::vector<std::pair<double, double>> pairs; ///< (eps, error)
    double gamma_hat = 0.0;
    double r_squared = 0.0;
};

/// Least-squares slope of log(error) against log(eps). Needs >= 3 pairs,
/// distinct eps and positive errors (DegenerateFit otherwise).
RateFit fit_rate(std::vector<std::pair<double, double>> pairs);

/// residual(t) = \int u(t) - \int u(0) + coefficient [h - g - 2 h0] - \int_0^t \int f,
/// one entry per stored profile.
std::vector<std::pair<double, double>> mass_residual(const Trajectory& sol, const ProblemConfig& config,
                                                     double coefficient);

double max_abs_residual(const std::vector<std::pair<double, double>>& residual);

struct SandwichTolerance {
    double value = 0.0;  ///< additive slack on the value ordering
    double domain = 0.0; ///< slack on the interval inclusions
};

struct SandwichReport {
    bool ok = true;
    double max_violation = 0.0;
    long violations = 0;
    double where_t = 0.0;
    double where_x = 0.0;
    std::string where; ///< which relation produced max_violation
    SandwichTolerance tol;
};

/// Checks [g_l, h_l] in [g_m, h_m] in [g_u, h_u] at every dense boundary time
/// of the middle run, and lower - tol <= mid <= upper + tol on the sup_error lattice.
SandwichReport sandwich_check(const Trajectory& lower, const Trajectory& mid, const Trajectory& upper,
                              SandwichTolerance tol, int time_samples = 64, int space_samples = 1024);

inline SandwichReport sandwich_check(const Trajectory& lower, const Trajectory& mid, const Trajectory& upper,
                                     double tol) {
    return sandwich_check(lower, mid, upper, SandwichTolerance{tol, tol});
}

/// max |u(t, x) - u(t, -x)| over the lattice plus sup |g + h| over the dense boundary samples.
double symmetry_defect(const Trajectory& sol, int time_samples = 64, int space_samples = 1024);

} // namespace fbp
