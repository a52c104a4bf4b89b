#include "fbplab/trajectory.hpp"

#include "fbplab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fbp {

double Profile::sample(double at) const noexcept {
    if (x.size() < 2 || at <= g || at >= h) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), at);
    if (it == x.begin() || it == x.end()) return 0.0;
    const auto i = static_cast<std::size_t>(it - x.begin());
    const double theta = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - theta) * v[i - 1] + theta * v[i];
}

double Profile::mass() const noexcept {
    double m = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) m += 0.5 * (v[i] + v[i - 1]) * (x[i] - x[i - 1]);
    return m;
}

Trajectory::Trajectory(double horizon, std::vector<Profile> profiles, std::vector<BoundarySample> boundary)
    : horizon_(horizon), profiles_(std::move(profiles)), boundary_(std::move(boundary)) {}

std::pair<double, double> Trajectory::boundary_at(double t) const {
    if (boundary_.empty()) throw Error(ErrorCode::InvalidArgument, "trajectory has no boundary samples");
    if (t <= boundary_.front().t) return {boundary_.front().g, boundary_.front().h};
    if (t >= boundary_.back().t) return {boundary_.back().g, boundary_.back().h};
    auto it = std::upper_bound(boundary_.begin(), boundary_.end(), t,
                               [](double value, const BoundarySample& s) { return value < s.t; });
    const BoundarySample& b = *it;
    const BoundarySample& a = *(it - 1);
    const double theta = (t - a.t) / (b.t - a.t);
    return {(1.0 - theta) * a.g + theta * b.g, (1.0 - theta) * a.h + theta * b.h};
}

double Trajectory::sample(double t, double x) const {
    const double slack = 1e-12 * std::max(1.0, horizon_);
    if (t < -slack || t > horizon_ + slack)
        throw Error(ErrorCode::OutOfHorizon, "sample time outside [0, T]");
    if (profiles_.empty()) throw Error(ErrorCode::InvalidArgument, "trajectory has no snapshots");
    t = std::clamp(t, 0.0, horizon_);

    auto it = std::lower_bound(profiles_.begin(), profiles_.end(), t,
                               [](const Profile& p, double value) { return p.t < value; });
    if (it == profiles_.end()) return profiles_.back().sample(x);
    if (std::abs(it->t - t) <= slack) return it->sample(x);
    if (it == profiles_.begin()) return it->sample(x);

    const auto [g, h] = boundary_at(t);
    if (x <= g || x >= h) return 0.0;
    const Profile& b = *it;
    const Profile& a = *(it - 1);
    const double theta = (t - a.t) / (b.t - a.t);
    return (1.0 - theta) * a.sample(x) + theta * b.sample(x);
}

std::pair<double, double> Trajectory::extent() const noexcept {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& s : boundary_) {
        if (first || s.g < lo) lo = s.g;
        if (first || s.h > hi) hi = s.h;
        first = false;
    }
    return {lo, hi};
}

} // namespace fbp
