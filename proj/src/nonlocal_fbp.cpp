#include "fbplab/nonlocal_fbp.hpp"

#include "fbplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fbp {

namespace {

constexpr double positivity_floor = -1e-10;
constexpr double coarsest_ratio = 8.0;
constexpr int min_flux_samples = 64;
constexpr double speed_safety = 4.0;

struct ActiveRange {
    long first = 0; // local index of the first node with x > g
    long last = -1; // local index of the last node with x < h
    bool empty() const noexcept { return last < first; }
};

ActiveRange active_range(const EulerianState& s) {
    const long n = static_cast<long>(s.values.size());
    ActiveRange r;
    r.first = std::clamp(static_cast<long>(std::floor(s.g / s.dx)) - s.first_index, 0L, n - 1);
    while (r.first < n && s.x(static_cast<std::size_t>(r.first)) <= s.g) ++r.first;
    while (r.first > 0 && s.x(static_cast<std::size_t>(r.first - 1)) > s.g) --r.first;
    r.last = std::clamp(static_cast<long>(std::ceil(s.h / s.dx)) - s.first_index, 0L, n - 1);
    while (r.last >= 0 && s.x(static_cast<std::size_t>(r.last)) >= s.h) --r.last;
    while (r.last + 1 < n && s.x(static_cast<std::size_t>(r.last + 1)) < s.h) ++r.last;
    return r;
}

double flux_node(int m, int M) noexcept {
    return (static_cast<double>(m) + 0.5) / M;
}

void check_resolution(double eps, double dx) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (!(dx > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
    if (dx > eps / coarsest_ratio * (1.0 + 1e-12))
        throw Error(ErrorCode::ResolutionTooCoarse, "grid spacing exceeds eps / 8");
}

// Doubles the grid extent on both sides, keeping node positions.
void grow(EulerianState& s) {
    const long old_first = s.first_index;
    const long old_last = s.first_index + static_cast<long>(s.values.size()) - 1;
    const long new_first = std::min(2 * old_first, old_first - 16);
    const long new_last = std::max(2 * old_last, old_last + 16);
    std::vector<double> values(static_cast<std::size_t>(new_last - new_first + 1), 0.0);
    std::copy(s.values.begin(), s.values.end(), values.begin() + (old_first - new_first));
    s.values = std::move(values);
    s.first_index = new_first;
}

void ensure_capacity(EulerianState& s, double margin) {
    while (s.x_max() - s.h < margin || s.g - s.x_min() < margin) grow(s);
}

double profile_integral(const EulerianState& s, const ActiveRange& r, const ReactionSpec& f) {
    if (f.family == ReactionSpec::Family::zero || r.empty()) return 0.0;
    double sum = 0.0;
    double x_prev = s.g, y_prev = 0.0;
    for (long k = r.first; k <= r.last; ++k) {
        const double x = s.x(static_cast<std::size_t>(k));
        const double y = f.eval_unchecked(s.values[static_cast<std::size_t>(k)]);
        sum += 0.5 * (y + y_prev) * (x - x_prev);
        x_prev = x;
        y_prev = y;
    }
    return sum + 0.5 * y_prev * (s.h - x_prev);
}

} // namespace

double NonlocalVariant::offset(double eps) const {
    return kind == Kind::modified ? std::pow(eps, beta) : 0.0;
}

double NonlocalVariant::coefficient(const Kernel& kernel, double eps) const {
    return kind == Kind::modified ? kernel.c_zero() * std::pow(eps, -beta) : c1 / eps;
}

void NonlocalVariant::check() const {
    if (kind == Kind::modified && !(beta > 0.0 && beta < 1.0))
        throw Error(ErrorCode::InvalidArgument, "modified flux needs beta in (0, 1)");
    if (kind == Kind::unmodified && !(c1 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "unmodified flux needs c1 > 0");
}

std::string NonlocalVariant::describe() const {
    char buf[64];
    if (kind == Kind::modified) std::snprintf(buf, sizeof buf, "modified(beta=%.17g)", beta);
    else std::snprintf(buf, sizeof buf, "unmodified(c1=%.17g)", c1);
    return buf;
}

double EulerianState::interpolate(double at) const noexcept {
    if (!(at > g && at < h) || values.empty()) return 0.0;
    const long i = static_cast<long>(std::floor(at / dx));
    const long n = static_cast<long>(values.size());
    auto value = [&](long global) {
        const long k = global - first_index;
        return (k >= 0 && k < n) ? values[static_cast<std::size_t>(k)] : 0.0;
    };
    double xl = static_cast<double>(i) * dx, ul = 0.0;
    if (xl > g) ul = value(i);
    else xl = g;
    double xr = static_cast<double>(i + 1) * dx, ur = 0.0;
    if (xr < h) ur = value(i + 1);
    else xr = h;
    if (!(xr > xl)) return ul;
    const double theta = (at - xl) / (xr - xl);
    return (1.0 - theta) * ul + theta * ur;
}

Profile EulerianState::to_profile(double reaction_integral) const {
    Profile p;
    p.t = t;
    p.g = g;
    p.h = h;
    p.reaction_integral = reaction_integral;
    const ActiveRange r = active_range(*this);
    p.x.push_back(g);
    p.v.push_back(0.0);
    for (long k = r.first; k <= r.last; ++k) {
        p.x.push_back(x(static_cast<std::size_t>(k)));
        p.v.push_back(values[static_cast<std::size_t>(k)]);
    }
    p.x.push_back(h);
    p.v.push_back(0.0);
    return p;
}

EulerianState EulerianState::trimmed() const {
    const ActiveRange r = active_range(*this);
    const long n = static_cast<long>(values.size());
    const long lo = std::max(0L, r.first - 1);
    const long hi = std::min(n - 1, std::max(r.last + 1, lo));
    EulerianState out;
    out.t = t;
    out.g = g;
    out.h = h;
    out.dx = dx;
    out.first_index = first_index + lo;
    out.values.assign(values.begin() + lo, values.begin() + hi + 1);
    return out;
}

NonlocalStencil::NonlocalStencil(const Kernel& kernel, double eps, double dx)
    : eps_(eps), dx_(dx), c_star_(kernel.c_star()), c_zero_(kernel.c_zero()) {
    check_resolution(eps, dx);

    const int K = static_cast<int>(std::floor(eps / dx + 1e-9));
    std::vector<double> raw(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) raw[k] = kernel.scaled_eval(eps, k * dx) * dx;
    if (std::abs(K * dx - eps) <= 1e-9 * eps) raw[K] *= 0.5;

    double second = 0.0;
    for (int k = 1; k <= K; ++k) second += 2.0 * raw[k] * (k * dx) * (k * dx);
    if (!(second > 0.0)) throw Error(ErrorCode::DegenerateKernel, "discrete kernel stencil has no spread");

    // Rescale the off-centre weights to hit the exact second moment, then put
    // the remaining mass at the centre.
    const double target = 2.0 * eps * eps * kernel.moment(2);
    const double scale = target / second;
    weights_.resize(raw.size());
    double off_centre = 0.0;
    for (int k = 1; k <= K; ++k) {
        weights_[k] = scale * raw[k];
        off_centre += 2.0 * weights_[k];
    }
    weights_[0] = 1.0 - off_centre;

    const int M = std::max(min_flux_samples, 4 * static_cast<int>(std::ceil(eps / dx - 1e-9)));
    // Midpoint samples: the window endpoint at the boundary itself is never read.
    flux_weights_.resize(static_cast<std::size_t>(M));
    double total = 0.0;
    for (int m = 0; m < M; ++m) {
        flux_weights_[m] = kernel.boundary_weight(flux_node(m, M)) / M;
        total += flux_weights_[m];
    }
    const double flux_scale = kernel.moment(1) / total;
    for (double& q : flux_weights_) q *= flux_scale;
}

void NonlocalStencil::apply(const EulerianState& s, double d, std::vector<double>& out) const {
    if (std::abs(s.dx - dx_) > 1e-15 * dx_)
        throw Error(ErrorCode::InvalidArgument, "state grid does not match the stencil", s.t);
    out.assign(s.values.size(), 0.0);
    const ActiveRange r = active_range(s);
    if (r.empty()) return;
    const int K = half_width();
    const long n = static_cast<long>(s.values.size());
    const double coef = d * c_star_ / (eps_ * eps_);
    const double outflow = 1.0 - weights_[0];
    const double* u = s.values.data();
    auto at = [&](long k) { return (k >= 0 && k < n) ? u[k] : 0.0; };

    for (long j = r.first; j <= r.last; ++j) {
        double sum = 0.0;
        if (j - K >= 0 && j + K < n) {
            for (int k = 1; k <= K; ++k) sum += weights_[k] * (u[j + k] + u[j - k]);
        } else {
            for (int k = 1; k <= K; ++k) sum += weights_[k] * (at(j + k) + at(j - k));
        }
        out[static_cast<std::size_t>(j)] = coef * (sum - outflow * u[j]);
    }
}

std::vector<double> NonlocalStencil::apply(const EulerianState& state, double d) const {
    std::vector<double> out;
    apply(state, d, out);
    return out;
}

double NonlocalStencil::boundary_flux(const EulerianState& s, double mu, const NonlocalVariant& variant,
                                      Side side) const {
    const double offset = variant.offset(eps_);
    if (!(s.h - s.g > 2.0 * (offset + eps_)))
        throw Error(ErrorCode::DomainTooSmall, "h - g must exceed 2 (offset + eps) for the flux law", s.t);
    const double coef = mu * (variant.kind == NonlocalVariant::Kind::modified ? c_zero_ * std::pow(eps_, -variant.beta)
                                                                               : variant.c1 / eps_);
    const int M = static_cast<int>(flux_weights_.size());
    double sum = 0.0;
    if (side == Side::right) {
        const double base = s.h - offset;
        for (int m = 0; m < M; ++m) sum += flux_weights_[m] * s.interpolate(base - eps_ * flux_node(m, M));
        return coef * sum;
    }
    const double base = s.g + offset;
    for (int m = 0; m < M; ++m) sum += flux_weights_[m] * s.interpolate(base + eps_ * flux_node(m, M));
    return -coef * sum;
}

std::vector<double> apply_nonlocal_operator(const EulerianState& state, const Kernel& kernel, double eps, double d) {
    return NonlocalStencil(kernel, eps, state.dx).apply(state, d);
}

double boundary_flux(const EulerianState& state, const Kernel& kernel, double eps, double mu,
                     const NonlocalVariant& variant, Side side) {
    return NonlocalStencil(kernel, eps, state.dx).boundary_flux(state, mu, variant, side);
}

namespace {

// In-place step; `work` receives the operator values.
void step_in_place(EulerianState& s, double dt, const ValidatedConfig& config, const NonlocalStencil& stencil,
                   const NonlocalVariant& variant, std::vector<double>& work) {
    const ProblemConfig& c = config.config();
    const double lambda = dt * c.d * stencil.c_star() / (stencil.eps() * stencil.eps());
    if (lambda > 1.0) throw Error(ErrorCode::StepTooLarge, "dt d C* / eps^2 <= 1 violated", s.t);
    if (dt * config.L0() > 0.5) throw Error(ErrorCode::StepTooLarge, "reaction step dt*L0 <= 1/2 violated", s.t);

    const double g_dot = stencil.boundary_flux(s, c.mu, variant, Side::left);
    const double h_dot = stencil.boundary_flux(s, c.mu, variant, Side::right);
    stencil.apply(s, c.d, work);

    const ActiveRange r = active_range(s);
    const ReactionSpec& f = c.reaction;
    for (long j = r.first; j <= r.last; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double u = s.values[k];
        double next = u + dt * (work[k] + f.eval_unchecked(u));
        if (next < positivity_floor)
            throw Error(ErrorCode::PositivityLoss, "density dropped below -1e-10", s.t + dt);
        s.values[k] = next < 0.0 ? 0.0 : next;
    }

    s.t += dt;
    s.g += dt * g_dot;
    s.h += dt * h_dot;

    // Nodes no longer strictly inside (g, h) are pinned to zero.
    for (long j = r.first; j <= r.last; ++j) {
        const double x = s.x(static_cast<std::size_t>(j));
        if (x <= s.g || x >= s.h) s.values[static_cast<std::size_t>(j)] = 0.0;
    }
    ensure_capacity(s, stencil.eps() * 2.0 + variant.offset(stencil.eps()) + (stencil.half_width() + 4) * s.dx);
}

} // namespace

EulerianState step(const EulerianState& state, double dt, const ValidatedConfig& config,
                   const NonlocalStencil& stencil, const NonlocalVariant& variant) {
    EulerianState next = state;
    std::vector<double> work;
    step_in_place(next, dt, config, stencil, variant, work);
    return next;
}

EulerianState step(const EulerianState& state, double dt, const ValidatedConfig& config, const Kernel& kernel,
                   double eps, const NonlocalVariant& variant) {
    return step(state, dt, config, NonlocalStencil(kernel, eps, state.dx), variant);
}

double default_nonlocal_dt(const ValidatedConfig& config, const Kernel& kernel, double eps) {
    return default_cfl_sigma * eps * eps / (config->d * kernel.c_star());
}

EulerianState initial_nonlocal_state(const ValidatedConfig& config, const Kernel& kernel, double eps,
                                     const NonlocalVariant& variant, double dx) {
    check_resolution(eps, dx);
    variant.check();
    const ProblemConfig& c = config.config();
    const double U = config.density_bound();
    const double speed = variant.kind == NonlocalVariant::Kind::modified
                             ? c.mu * U * std::pow(eps, -variant.beta)
                             : c.mu * U * variant.c1 / (kernel.c_zero() * eps);
    const double extent = c.h0 + speed_safety * speed * c.T + 2.0 * (eps + variant.offset(eps));
    const long M = static_cast<long>(std::ceil(extent / dx)) + static_cast<long>(std::ceil(eps / dx)) + 4;

    EulerianState s;
    s.t = 0.0;
    s.g = -c.h0;
    s.h = c.h0;
    s.dx = dx;
    s.first_index = -M;
    s.values.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        const double x = s.x(k);
        if (x > s.g && x < s.h) s.values[k] = c.initial.eval(x);
    }
    return s;
}

NonlocalSolution solve_nonlocal(const ValidatedConfig& config, const Kernel& kernel, double eps,
                                const NonlocalVariant& variant, double dx, double dt, OutputSchedule schedule) {
    variant.check();
    check_resolution(eps, dx);
    if (schedule.intervals < 1) throw Error(ErrorCode::InvalidArgument, "output schedule needs >= 1 interval");
    const ProblemConfig& c = config.config();
    if (!(variant.offset(eps) + eps < c.h0))
        throw Error(ErrorCode::DomainTooSmall, "initial interval too short for the flux sampling offset", 0.0);

    const NonlocalStencil stencil(kernel, eps, dx);
    if (!(dt > 0.0)) dt = default_nonlocal_dt(config, kernel, eps);

    const double T = c.T;
    const double interval = T / schedule.intervals;
    const auto per_interval = static_cast<long>(std::ceil(interval / dt - 1e-9));
    const long total = per_interval * schedule.intervals;
    const double dt_eff = T / static_cast<double>(total);

    NonlocalSolution sol;
    sol.horizon_ = T;
    sol.resolution_ = {dx, dt_eff, eps, dt_eff * c.d * stencil.c_star() / (eps * eps), variant, kernel.name()};
    sol.boundary_.reserve(static_cast<std::size_t>(total) + 1);

    EulerianState state = initial_nonlocal_state(config, kernel, eps, variant, dx);
    double cumulative = 0.0;
    sol.boundary_.push_back({state.t, state.g, state.h});
    sol.snapshots_.push_back(state.trimmed());
    sol.profiles_.push_back(state.to_profile(cumulative));

    std::vector<double> work;
    for (long n = 1; n <= total; ++n) {
        const double f_old = profile_integral(state, active_range(state), c.reaction);
        try {
            step_in_place(state, dt_eff, config, stencil, variant, work);
        } catch (const Error& e) {
            throw e.at_time(static_cast<double>(n - 1) * dt_eff);
        }
        state.t = (n == total) ? T : static_cast<double>(n) * dt_eff;
        cumulative += dt_eff * f_old;
        sol.boundary_.push_back({state.t, state.g, state.h});
        if (n % per_interval == 0) {
            sol.snapshots_.push_back(state.trimmed());
            sol.profiles_.push_back(state.to_profile(cumulative));
        }
    }
    return sol;
}

} // namespace fbp
