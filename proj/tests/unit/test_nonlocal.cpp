#include "fbplab/analysis.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/local_fbp.hpp"
#include "fbplab/nonlocal_fbp.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fbp;

namespace {

const Kernel& epa() {
    static const Kernel k = Kernel::epanechnikov();
    return k;
}

// Closed-form Epanechnikov tail mass W(w) = int_w^1 0.75 (1 - z^2) dz.
double epa_W(double w) { return 0.75 * ((1.0 - w) - (1.0 - w * w * w) / 3.0); }

EulerianState state_on(double dx, double g, double h, double margin, const std::function<double(double)>& u) {
    EulerianState s;
    s.dx = dx;
    s.g = g;
    s.h = h;
    s.first_index = static_cast<long>(std::floor((g - margin) / dx)) - 2;
    const long last = static_cast<long>(std::ceil((h + margin) / dx)) + 2;
    s.values.assign(static_cast<std::size_t>(last - s.first_index + 1), 0.0);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double x = s.x(i);
        if (x > g && x < h) s.values[i] = u(x);
    }
    return s;
}

ValidatedConfig stefan(double V = 1.0) {
    ProblemConfig c;
    c.initial = InitialDataSpec::quadratic_bump(V, 1.0);
    return validate_or_throw(c);
}

} // namespace

TEST_SUITE("nonlocal") {

TEST_CASE("flux law variants") {
    const NonlocalVariant m = NonlocalVariant::modified(0.5);
    CHECK(m.offset(0.04) == doctest::Approx(0.2));
    CHECK(m.coefficient(epa(), 0.04) == doctest::Approx(16.0 / 3.0 / 0.2));
    const NonlocalVariant u = NonlocalVariant::unmodified(10.0);
    CHECK(u.offset(0.04) == 0.0);
    CHECK(u.coefficient(epa(), 0.04) == doctest::Approx(250.0));
    CHECK_THROWS_AS(NonlocalVariant::modified(1.2).check(), Error);
    CHECK_THROWS_AS(NonlocalVariant::unmodified(0.0).check(), Error);
}

TEST_CASE("interpolation pins zeros at the exact boundary") {
    const EulerianState s = state_on(0.01, -0.503, 0.497, 0.1, [](double) { return 2.0; });
    CHECK(s.interpolate(-0.503) == 0.0);
    CHECK(s.interpolate(0.497) == 0.0);
    CHECK(s.interpolate(0.6) == 0.0);
    CHECK(s.interpolate(0.1234) == doctest::Approx(2.0));
    // Between the last node 0.49 and h = 0.497 the reconstruction falls linearly to 0.
    CHECK(s.interpolate(0.4935) == doctest::Approx(1.0));
    const Profile p = s.to_profile();
    CHECK(p.x.front() == -0.503);
    CHECK(p.x.back() == 0.497);
    CHECK(p.v.front() == 0.0);
    CHECK(p.v.back() == 0.0);
}

TEST_CASE("stencil moments") {
    for (int ratio : {8, 13, 32}) {
        const double eps = 0.1;
        const NonlocalStencil st(epa(), eps, eps / ratio);
        const auto& w = st.weights();
        double mass = w[0], second = 0.0;
        for (std::size_t k = 1; k < w.size(); ++k) {
            mass += 2.0 * w[k];
            second += 2.0 * w[k] * std::pow(k * st.dx(), 2);
            CHECK(w[k] >= 0.0);
        }
        CHECK(std::abs(mass - 1.0) <= 1e-14);
        CHECK(std::abs(second - 2.0 * eps * eps / 10.0) <= 1e-15);
    }
    try {
        NonlocalStencil(epa(), 0.1, 0.1 / 7.9);
        FAIL("expected ResolutionTooCoarse");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ResolutionTooCoarse);
    }
}

TEST_CASE("operator on polynomial and trigonometric profiles") {
    const double eps = 0.1, d = 0.5;
    auto interior = [&](const EulerianState& s, std::size_t i) {
        const double x = s.x(i);
        return x - eps > s.g && x + eps < s.h;
    };
    SUBCASE("constants, lines and parabolas") {
        const EulerianState c = state_on(eps / 16, -1.0, 1.0, 0.3, [](double) { return 3.0; });
        const EulerianState l = state_on(eps / 16, -1.0, 1.0, 0.3, [](double x) { return x; });
        const EulerianState q = state_on(eps / 16, -1.0, 1.0, 0.3, [](double x) { return x * x; });
        const auto Lc = apply_nonlocal_operator(c, epa(), eps, d);
        const auto Ll = apply_nonlocal_operator(l, epa(), eps, d);
        const auto Lq = apply_nonlocal_operator(q, epa(), eps, d);
        for (std::size_t i = 0; i < c.values.size(); ++i) {
            if (!interior(c, i)) continue;
            CHECK(std::abs(Lc[i]) <= 1e-10);
            CHECK(std::abs(Ll[i]) <= 1e-10);
            CHECK(std::abs(Lq[i] - 2.0 * d) <= 1e-10);
        }
        // Near the boundary the missing mass pulls the operator negative.
        CHECK(Lc[static_cast<std::size_t>(std::lround(0.99 / c.dx) - c.first_index)] < 0.0);
    }
    SUBCASE("sine against the continuum operator") {
        // (C*/eps^2)(J_eps * sin - sin) = (C*/eps^2)(\hat J(eps) - 1) sin, \hat J(eps) = int J(z) cos(eps z) dz.
        const double jhat = oracle::simpson([&](double z) { return epa().eval(z) * std::cos(eps * z); }, -1, 1, 400);
        const double factor = d * 10.0 / (eps * eps) * (jhat - 1.0);
        const EulerianState s = state_on(eps / 32, -1.0, 1.0, 0.3, [](double x) { return std::sin(x); });
        const auto Ls = apply_nonlocal_operator(s, epa(), eps, d);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (interior(s, i)) worst = std::max(worst, std::abs(Ls[i] - factor * std::sin(s.x(i))));
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("boundary flux") {
    const double eps = 0.1;
    SUBCASE("constant profile, both variants") {
        // h a 1e-9 sliver beyond the outermost nodes.
        const EulerianState s = state_on(eps / 16, -1.0 - 1e-9, 1.0 + 1e-9, 0.5, [](double) { return 2.0; });
        const double mod = boundary_flux(s, epa(), eps, 1.5, NonlocalVariant::modified(0.5), Side::right);
        CHECK(std::abs(mod / (1.5 * 2.0 / std::sqrt(eps)) - 1.0) <= 1e-6);
        const double unmod = boundary_flux(s, epa(), eps, 1.5, NonlocalVariant::unmodified(10.0), Side::right);
        CHECK(std::abs(unmod / (1.5 * 2.0 * 10.0 / (16.0 / 3.0 * eps)) - 1.0) <= 1e-6);
        CHECK(boundary_flux(s, epa(), eps, 1.5, NonlocalVariant::modified(0.5), Side::left) == doctest::Approx(-mod));
    }
    SUBCASE("linear profile at the edge") {
        // u = (h - x): h' = mu c1 int_0^1 W(w) w dw.
        const double h = 1.0 + 1e-9;
        const EulerianState s = state_on(eps / 16, -h, h, 0.5, [&](double x) { return std::min(h - x, h + x); });
        const double expected = 10.0 * oracle::simpson([](double w) { return w * epa_W(w); }, 0, 1, 200);
        const double got = boundary_flux(s, epa(), eps, 1.0, NonlocalVariant::unmodified(10.0), Side::right);
        CHECK(got == doctest::Approx(expected).epsilon(1e-4));
    }
    SUBCASE("empty sampling window") {
        const EulerianState s = state_on(eps / 8, -1.0, 1.0, 0.5, [](double x) { return std::abs(x) < 0.1 ? 1.0 : 0.0; });
        CHECK(boundary_flux(s, epa(), eps, 1.0, NonlocalVariant::modified(0.5), Side::right) == 0.0);
        CHECK(boundary_flux(s, epa(), eps, 1.0, NonlocalVariant::unmodified(10.0), Side::left) == 0.0);
    }
    SUBCASE("interval too short for the offset") {
        const EulerianState s = state_on(eps / 8, -0.3, 0.3, 0.5, [](double) { return 1.0; });
        try {
            (void)boundary_flux(s, epa(), eps, 1.0, NonlocalVariant::modified(0.5), Side::right);
            FAIL("expected DomainTooSmall");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DomainTooSmall);
        }
    }
}

TEST_CASE("explicit step") {
    const double eps = 0.1;
    const ValidatedConfig cfg = stefan();
    const NonlocalStencil st(epa(), eps, eps / 8);
    const double dt = default_nonlocal_dt(cfg, epa(), eps);
    const NonlocalVariant mod = NonlocalVariant::modified(0.5);

    SUBCASE("symmetric state stays symmetric") {
        EulerianState s = initial_nonlocal_state(cfg, epa(), eps, mod, eps / 8);
        for (int n = 0; n < 20; ++n) s = step(s, dt, cfg, st, mod);
        CHECK(std::abs(s.g + s.h) <= 1e-12);
        const long n = static_cast<long>(s.values.size());
        for (long k = 0; k < n; ++k) {
            const long mirror = -(s.first_index + k) - s.first_index;
            if (mirror >= 0 && mirror < n) CHECK(s.values[k] == s.values[mirror]);
        }
    }
    SUBCASE("nonnegative data stay nonnegative under the step limit") {
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            EulerianState s = state_on(eps / 8, -1.0, 1.0, 0.5, [&](double) { return U(rng) < 0.3 ? 0.0 : U(rng); });
            const EulerianState next = step(s, dt, cfg, st, mod);
            for (double v : next.values) CHECK(v >= 0.0);
        }
    }
    SUBCASE("empty flux windows leave the boundary in place") {
        const EulerianState s = state_on(eps / 8, -1.0, 1.0, 0.5, [](double x) { return std::abs(x) < 0.1 ? 1.0 : 0.0; });
        const EulerianState next = step(s, dt, cfg, st, mod);
        CHECK(next.g == s.g);
        CHECK(next.h == s.h);
    }
    SUBCASE("step limit") {
        const EulerianState s = initial_nonlocal_state(cfg, epa(), eps, mod, eps / 8);
        CHECK_THROWS_AS(step(s, 2.5 * dt, cfg, st, mod), Error);
    }
    SUBCASE("grid grows when the interval reaches the edge") {
        EulerianState s = state_on(eps / 8, -1.0, 1.0, 0.0, [](double x) { return 1.0 - x * x; });
        const long first = s.first_index;
        const double mass = s.to_profile().mass();
        const EulerianState next = step(s, dt, cfg, st, mod);
        CHECK(next.first_index < first);
        CHECK(next.x_max() - next.h > 2.0 * eps);
        CHECK(next.to_profile().mass() == doctest::Approx(mass).epsilon(0.05));
    }
}

TEST_CASE("full solve") {
    const ValidatedConfig cfg = stefan();
    const NonlocalVariant mod = NonlocalVariant::modified(0.5);
    const NonlocalSolution sol = solve_nonlocal(cfg, epa(), 0.1, mod, 0.1 / 8, 0.0);

    SUBCASE("boundaries are monotone") {
        const auto b = sol.boundary();
        for (std::size_t i = 1; i < b.size(); ++i) {
            CHECK(b[i].h >= b[i - 1].h);
            CHECK(b[i].g <= b[i - 1].g);
        }
        CHECK(sol.resolution().cfl_sigma <= 0.5 + 1e-12);
        CHECK(sol.resolution().kernel == "epanechnikov");
    }
    SUBCASE("sampling") {
        CHECK(sol.sample(0.0, 0.0) == doctest::Approx(1.0));
        const auto [g, h] = sol.boundary_at(0.6);
        CHECK(sol.sample(0.6, h + 0.1) == 0.0);
        for (double x : {0.1, 0.5, 0.9, 1.2}) CHECK(sol.sample(0.6, x) == sol.sample(0.6, -x));
        CHECK_THROWS_AS(sol.sample(1.01, 0.0), Error);
    }
    SUBCASE("snapshots hold zero outside the interval") {
        for (const EulerianState& s : sol.snapshots())
            for (std::size_t k = 0; k < s.values.size(); ++k)
                if (s.x(k) <= s.g || s.x(k) >= s.h) CHECK(s.values[k] == 0.0);
    }
    SUBCASE("ordered initial data stay ordered") {
        const NonlocalSolution big = solve_nonlocal(stefan(1.3), epa(), 0.1, mod, 0.1 / 8, 0.0);
        const SandwichReport r = sandwich_check(sol, sol, big, 1e-8);
        CHECK(r.ok);
    }
    SUBCASE("halving eps moves the solution toward the local problem") {
        const LocalSolution ref = solve_local(cfg, PerturbationKnobs::inert(), 256, 1e-3);
        const NonlocalSolution fine = solve_nonlocal(cfg, epa(), 0.05, mod, 0.05 / 8, 0.0);
        CHECK(sup_error(fine, ref).overall_sup < sup_error(sol, ref).overall_sup);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(solve_nonlocal(cfg, epa(), 0.5, mod, 0.5 / 8, 0.0), Error);
        CHECK_THROWS_AS(solve_nonlocal(cfg, epa(), 0.1, mod, 0.1 / 4, 0.0), Error);
    }
}

}
