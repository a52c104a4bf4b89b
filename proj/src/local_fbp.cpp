#include "fbplab/local_fbp.hpp"

#include "fbplab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fbp {

namespace {

constexpr double min_width = 1e-6;
constexpr double positivity_floor = -1e-10;
constexpr int min_nodes_for_stencil = 4;
constexpr int min_nodes_for_solve = 32;

// Crank-Nicolson diffusion with explicit moving-frame advection and source.
// Interior system (1 + r_new) w_j - r_new/2 (w_{j-1} + w_{j+1}) = rhs_j, Thomas sweep.
void solve_interior(std::vector<double>& rhs, int N, double r_new, std::vector<double>& scratch) {
    scratch.resize(rhs.size());
    const double half_r = 0.5 * r_new;
    const double diag = 1.0 + r_new;
    const double off = -half_r;
    double denom = diag;
    scratch[1] = off / denom;
    rhs[1] = rhs[1] / denom;
    for (int j = 2; j < N; ++j) {
        denom = diag - off * scratch[j - 1];
        scratch[j] = off / denom;
        rhs[j] = (rhs[j] - off * rhs[j - 1]) / denom;
    }
    for (int j = N - 2; j >= 1; --j) rhs[j] -= scratch[j] * rhs[j + 1];
    rhs[0] = 0.0;
    rhs[N] = 0.0;
}

// Explicit part of the transformed equation at one state:
// chi(xi) / (h - g) * w_xi + q(t, x, w) at interior node j.
template <class Source>
void explicit_terms(const FixedDomainState& s, double g_dot, double h_dot, Source& source,
                    std::vector<double>& out) {
    const int N = s.nodes();
    const double dxi = 1.0 / N;
    const double width = s.h - s.g;
    const double adv_scale = 1.0 / (2.0 * dxi * width);
    const auto& w = s.values;
    out.assign(w.size(), 0.0);
    for (int j = 1; j < N; ++j) {
        const double xi = j * dxi;
        const double chi = (1.0 - xi) * g_dot + xi * h_dot;
        out[j] = adv_scale * chi * (w[j + 1] - w[j - 1]) + source(s.t, s.g + xi * width, w[j]);
    }
}

struct Workspace {
    std::vector<double> thomas;
    std::vector<double> e_old;
    std::vector<double> e_mid;
};

// One stage: w_old + (r_old/2) D2 w_old + dt * e, implicit half on the new width.
FixedDomainState stage(const FixedDomainState& s, double dt, double d, double g_new, double h_new,
                       const std::vector<double>& e, std::vector<double>& scratch) {
    const int N = s.nodes();
    const double dxi = 1.0 / N;
    const double w_old = s.h - s.g;
    const double w_new = h_new - g_new;
    const double r_old = dt * d / (w_old * w_old * dxi * dxi);
    const double r_new = dt * d / (w_new * w_new * dxi * dxi);

    FixedDomainState next;
    next.t = s.t + dt;
    next.g = g_new;
    next.h = h_new;
    next.values.assign(s.values.size(), 0.0);
    const auto& w = s.values;
    auto& rhs = next.values;
    for (int j = 1; j < N; ++j) rhs[j] = w[j] + 0.5 * r_old * (w[j + 1] - 2.0 * w[j] + w[j - 1]) + dt * e[j];
    solve_interior(rhs, N, r_new, scratch);
    return next;
}

// Predictor-corrector (Heun) on the boundaries and the explicit terms, Crank-Nicolson
// on diffusion. `velocities(state)` returns (g', h').
template <class Velocities, class Source>
FixedDomainState advance(const FixedDomainState& s, double dt, double d, Velocities&& velocities,
                         Source&& source, Workspace& ws) {
    const auto [g0, h0] = velocities(s);
    explicit_terms(s, g0, h0, source, ws.e_old);
    FixedDomainState pred = stage(s, dt, d, s.g + dt * g0, s.h + dt * h0, ws.e_old, ws.thomas);
    if (pred.h - pred.g < min_width) throw Error(ErrorCode::DegenerateDomain, "h - g below 1e-6", pred.t);
    for (double& v : pred.values) v = std::max(v, 0.0);

    const auto [g1, h1] = velocities(pred);
    explicit_terms(pred, g1, h1, source, ws.e_mid);
    for (std::size_t j = 0; j < ws.e_mid.size(); ++j) ws.e_mid[j] = 0.5 * (ws.e_old[j] + ws.e_mid[j]);
    return stage(s, dt, d, s.g + 0.5 * dt * (g0 + g1), s.h + 0.5 * dt * (h0 + h1), ws.e_mid, ws.thomas);
}

double reaction_integral(const FixedDomainState& s, const ReactionSpec& reaction) {
    if (reaction.family == ReactionSpec::Family::zero) return 0.0;
    const int N = s.nodes();
    double sum = 0.0;
    for (int j = 1; j < N; ++j) sum += reaction.eval_unchecked(s.values[j]);
    return sum * (s.h - s.g) / N;
}

void check_cfl(const FixedDomainState& s, double dt, double g_dot, double h_dot, double L0) {
    const double dxi = 1.0 / s.nodes();
    const double chi_max = std::max(std::abs(g_dot), std::abs(h_dot)) / (s.h - s.g);
    if (dt * chi_max / dxi > 1.0)
        throw Error(ErrorCode::StepTooLarge, "advection CFL dt*max|chi|/dxi <= 1 violated", s.t);
    if (dt * L0 > 0.5) throw Error(ErrorCode::StepTooLarge, "reaction step dt*L0 <= 1/2 violated", s.t);
}

} // namespace

double PerturbationKnobs::source() const noexcept {
    return active() ? A * std::pow(eps, gamma1) : 0.0;
}

double PerturbationKnobs::drift() const noexcept {
    return active() ? B * std::pow(eps, gamma1) : 0.0;
}

void PerturbationKnobs::check() const {
    if (!(A >= 0.0)) throw Error(ErrorCode::InvalidArgument, "perturbation source A must be >= 0");
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "perturbation eps must be >= 0");
    if (!(gamma1 > 0.0 && gamma1 < 0.5))
        throw Error(ErrorCode::InvalidArgument, "perturbation exponent gamma1 must lie in (0, 1/2)");
}

Profile FixedDomainState::to_profile(double reaction_integral_value) const {
    Profile p;
    p.t = t;
    p.g = g;
    p.h = h;
    p.v = values;
    p.x.resize(values.size());
    const int N = nodes();
    for (int j = 0; j <= N; ++j) p.x[j] = g + (static_cast<double>(j) / N) * (h - g);
    p.x.front() = g;
    p.x.back() = h;
    p.reaction_integral = reaction_integral_value;
    return p;
}

double transform_to_physical(const FixedDomainState& state, double xi) {
    if (!(state.h > state.g)) throw Error(ErrorCode::DegenerateDomain, "front-fixing needs g < h", state.t);
    return state.g + xi * (state.h - state.g);
}

std::pair<double, double> boundary_velocities(const FixedDomainState& state, const PerturbationKnobs& knobs,
                                              double mu) {
    const int N = state.nodes();
    if (N < min_nodes_for_stencil)
        throw Error(ErrorCode::InvalidArgument, "boundary stencil needs N >= 4", state.t);
    const double width = state.h - state.g;
    if (width < min_width) throw Error(ErrorCode::DegenerateDomain, "h - g below 1e-6", state.t);

    const auto& v = state.values;
    const double scale = 2.0 * width / N;
    const double vx_left = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / scale;
    const double vx_right = (3.0 * v[N] - 4.0 * v[N - 1] + v[N - 2]) / scale;
    const double drift = knobs.drift();
    return {-mu * vx_left - drift, -mu * vx_right + drift};
}

FixedDomainState imex_advance(const FixedDomainState& state, double dt, double d, double g_dot, double h_dot,
                              const LocalSource& source) {
    Workspace ws;
    return advance(
        state, dt, d, [=](const FixedDomainState&) { return std::pair<double, double>{g_dot, h_dot}; }, source, ws);
}

namespace {

FixedDomainState step_impl(const FixedDomainState& state, double dt, const ValidatedConfig& config,
                           const PerturbationKnobs& knobs, Workspace& ws) {
    const ProblemConfig& c = config.config();
    const auto [g_dot, h_dot] = boundary_velocities(state, knobs, c.mu);
    check_cfl(state, dt, g_dot, h_dot, config.L0());

    const double mu = c.mu;
    auto velocities = [&knobs, mu](const FixedDomainState& s) { return boundary_velocities(s, knobs, mu); };
    const double extra = knobs.source();
    FixedDomainState next;
    switch (c.reaction.family) {
    case ReactionSpec::Family::zero:
        next = advance(state, dt, c.d, velocities, [extra](double, double, double) { return extra; }, ws);
        break;
    case ReactionSpec::Family::fisher_kpp: {
        const double a = c.reaction.a, b = c.reaction.b;
        next = advance(state, dt, c.d, velocities, [=](double, double, double v) { return v * (a - b * v) + extra; },
                       ws);
        break;
    }
    case ReactionSpec::Family::custom_polynomial: {
        const ReactionSpec& f = c.reaction;
        next = advance(state, dt, c.d, velocities,
                       [&f, extra](double t, double x, double v) { return f.eval(t, x, v) + extra; }, ws);
        break;
    }
    }

    if (next.h - next.g < min_width) throw Error(ErrorCode::DegenerateDomain, "h - g below 1e-6", next.t);
    for (double& v : next.values) {
        if (v < positivity_floor) throw Error(ErrorCode::PositivityLoss, "density dropped below -1e-10", next.t);
        if (v < 0.0) v = 0.0;
    }
    return next;
}

} // namespace

FixedDomainState step(const FixedDomainState& state, double dt, const ValidatedConfig& config,
                      const PerturbationKnobs& knobs) {
    Workspace ws;
    return step_impl(state, dt, config, knobs, ws);
}

FixedDomainState initial_local_state(const ValidatedConfig& config, int N) {
    const ProblemConfig& c = config.config();
    FixedDomainState s;
    s.t = 0.0;
    s.g = -c.h0;
    s.h = c.h0;
    s.values.assign(static_cast<std::size_t>(N) + 1, 0.0);
    for (int j = 1; j < N; ++j) s.values[j] = c.initial.eval(-c.h0 + (2.0 * c.h0 * j) / N);
    return s;
}

LocalSolution solve_local(const ValidatedConfig& config, const PerturbationKnobs& knobs, int N, double dt,
                          OutputSchedule schedule) {
    knobs.check();
    if (N < min_nodes_for_solve) throw Error(ErrorCode::InvalidArgument, "local solve needs N >= 32");
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
    if (schedule.intervals < 1) throw Error(ErrorCode::InvalidArgument, "output schedule needs >= 1 interval");

    const double T = config->T;
    const double interval = T / schedule.intervals;
    const auto per_interval = static_cast<long>(std::ceil(interval / dt - 1e-9));
    const long total = per_interval * schedule.intervals;
    const double dt_eff = T / static_cast<double>(total);

    LocalSolution sol;
    sol.horizon_ = T;
    sol.knobs_ = knobs;
    sol.resolution_ = {N, dt_eff};
    sol.boundary_.reserve(static_cast<std::size_t>(total) + 1);

    FixedDomainState state = initial_local_state(config, N);
    double cumulative = 0.0;
    double f_old = reaction_integral(state, config->reaction);
    sol.boundary_.push_back({state.t, state.g, state.h});
    sol.snapshots_.push_back(state);
    sol.profiles_.push_back(state.to_profile(cumulative));

    Workspace ws;
    for (long n = 1; n <= total; ++n) {
        try {
            state = step_impl(state, dt_eff, config, knobs, ws);
        } catch (const Error& e) {
            throw e.at_time(state.t);
        }
        state.t = (n == total) ? T : static_cast<double>(n) * dt_eff;
        const double f_new = reaction_integral(state, config->reaction);
        cumulative += dt_eff * f_old;
        f_old = f_new;
        sol.boundary_.push_back({state.t, state.g, state.h});
        if (n % per_interval == 0) {
            sol.snapshots_.push_back(state);
            sol.profiles_.push_back(state.to_profile(cumulative));
        }
    }
    return sol;
}

} // namespace fbp
