#pragma once

#include "fbplab/problem.hpp"
#include "fbplab/trajectory.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace fbp {

/// Perturbation of the Stefan problem: source A eps^gamma1 in the equation and
/// drift +-B eps^gamma1 on the boundary speeds. eps = 0 leaves the problem untouched.
struct PerturbationKnobs {
    double A = 0.0;
    double B = 0.0;
    double gamma1 = 0.4;
    double eps = 0.0;

    static PerturbationKnobs inert() { return {}; }
    /// Upper preset: A = B = 1.
    static PerturbationKnobs upper(double eps, double gamma1) { return {1.0, 1.0, gamma1, eps}; }
    /// Lower preset: A = 0, B = -2.
    static PerturbationKnobs lower(double eps, double gamma1) { return {0.0, -2.0, gamma1, eps}; }

    bool active() const noexcept { return eps > 0.0 && (A != 0.0 || B != 0.0); }
    /// A eps^gamma1
    double source() const noexcept;
    /// B eps^gamma1
    double drift() const noexcept;
    /// Throws InvalidArgument unless A >= 0, eps >= 0 and gamma1 in (0, 1/2).
    void check() const;
};

/// Density on the reference grid xi_j = j / N of [0, 1]; x = g + xi (h - g).
struct FixedDomainState {
    double t = 0.0;
    double g = 0.0;
    double h = 0.0;
    std::vector<double> values;

    int nodes() const noexcept { return static_cast<int>(values.size()) - 1; }
    Profile to_profile(double reaction_integral = 0.0) const;
};

double transform_to_physical(const FixedDomainState& state, double xi);

/// (g', h') from the Stefan condition with second-order one-sided derivatives,
/// plus the knob drift.
std::pair<double, double> boundary_velocities(const FixedDomainState& state,
                                              const PerturbationKnobs& knobs, double mu);

/// Source term q(t, x, v) added to the right-hand side.
using LocalSource = std::function<double(double t, double x, double v)>;

/// Advances the density one step on prescribed boundary speeds: Crank-Nicolson
/// on d v_xx, Heun on the moving-frame advection and on `source` (sampled at t
/// and t + dt). The boundaries move by dt * (g_dot, h_dot). No positivity check.
FixedDomainState imex_advance(const FixedDomainState& state, double dt, double d, double g_dot,
                              double h_dot, const LocalSource& source);

/// One IMEX step: Crank-Nicolson diffusion; predictor-corrector on the boundary
/// speeds, the moving-frame advection, reaction and source.
FixedDomainState step(const FixedDomainState& state, double dt, const ValidatedConfig& config,
                      const PerturbationKnobs& knobs);

struct LocalResolution {
    int N = 0;
    double dt = 0.0; ///< effective step after alignment with the output schedule
};

class LocalSolution : public Trajectory {
public:
    const std::vector<FixedDomainState>& snapshots() const noexcept { return snapshots_; }
    const LocalResolution& resolution() const noexcept { return resolution_; }
    const PerturbationKnobs& knobs() const noexcept { return knobs_; }

private:
    friend LocalSolution solve_local(const ValidatedConfig&, const PerturbationKnobs&, int, double,
                                     OutputSchedule);
    LocalSolution() = default;

    std::vector<FixedDomainState> snapshots_;
    LocalResolution resolution_;
    PerturbationKnobs knobs_;
};

/// Initial reference state for N intervals.
FixedDomainState initial_local_state(const ValidatedConfig& config, int N);

/// Integrates to T. dt is an upper bound; the effective step divides every
/// output interval evenly. Step failures are rethrown with the failing time.
LocalSolution solve_local(const ValidatedConfig& config, const PerturbationKnobs& knobs, int N,
                          double dt, OutputSchedule schedule = {});

} // namespace fbp
