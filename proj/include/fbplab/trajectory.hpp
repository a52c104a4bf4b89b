#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace fbp {

struct BoundarySample {
    double t = 0.0;
    double g = 0.0;
    double h = 0.0;
};

/// Piecewise-linear density at one output time, in physical coordinates.
/// x runs from g to h; v vanishes at both ends.
struct Profile {
    double t = 0.0;
    double g = 0.0;
    double h = 0.0;
    std::vector<double> x;
    std::vector<double> v;
    /// \int_0^t \int_g^h f(u) dx ds accumulated by the solver up to this time.
    double reaction_integral = 0.0;

    /// Linear interpolation, zero outside (g, h).
    double sample(double at) const noexcept;
    /// Trapezoid over the native nodes.
    double mass() const noexcept;
};

/// Uniform output schedule: `intervals` + 1 snapshots at k T / intervals.
struct OutputSchedule {
    int intervals = 64;
};

/// Common read-only view of a computed free boundary trajectory (local or
/// nonlocal): dense boundary samples plus snapshot profiles, with the
/// zero-extension convention outside the moving interval.
class Trajectory {
public:
    double horizon() const noexcept { return horizon_; }
    std::span<const Profile> profiles() const noexcept { return profiles_; }
    std::span<const BoundarySample> boundary() const noexcept { return boundary_; }

    /// (g(t), h(t)) by linear interpolation of the dense boundary samples.
    std::pair<double, double> boundary_at(double t) const;

    /// Density at (t, x): linear in t between snapshots and piecewise linear in x,
    /// zero outside (g(t), h(t)). Throws OutOfHorizon for t outside [0, T].
    double sample(double t, double x) const;

    /// Smallest g and largest h over the whole run.
    std::pair<double, double> extent() const noexcept;

protected:
    Trajectory() = default;
    Trajectory(double horizon, std::vector<Profile> profiles, std::vector<BoundarySample> boundary);

    double horizon_ = 0.0;
    std::vector<Profile> profiles_;
    std::vector<BoundarySample> boundary_;
};

} // namespace fbp
