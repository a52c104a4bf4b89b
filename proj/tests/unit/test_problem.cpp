#include "fbplab/errors.hpp"
#include "fbplab/problem.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace fbp;

namespace {

bool names(const ValidationResult& r, const std::string& hypothesis, const std::string& message = {}) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) {
        return v.hypothesis == hypothesis && (message.empty() || v.message == message);
    });
}

ProblemConfig fisher_config() {
    ProblemConfig c;
    c.reaction = ReactionSpec::fisher_kpp(1.0, 1.0);
    c.initial = InitialDataSpec::quadratic_bump(1.0, 1.0);
    return c;
}

} // namespace

TEST_SUITE("problem") {

TEST_CASE("fisher-kpp config validates with K = a / b") {
    const ValidationResult r = validate(fisher_config());
    REQUIRE(r.ok());
    CHECK(r.value->K() == doctest::Approx(1.0));
    CHECK(r.value->L0() >= 1.0);
    CHECK(r.value->sup_v0() == doctest::Approx(1.0));
}

TEST_CASE("violations are reported, not thrown") {
    SUBCASE("zero profile") {
        ProblemConfig c = fisher_config();
        c.initial = InitialDataSpec::quadratic_bump(0.0, 1.0);
        const ValidationResult r = validate(c);
        CHECK_FALSE(r.ok());
        CHECK(names(r, "initial_profile", "v0 not positive on (-h0,h0)"));
    }
    SUBCASE("reaction with a constant term") {
        ProblemConfig c = fisher_config();
        c.reaction = ReactionSpec::polynomial({1e-3, 1.0, -1.0});
        CHECK(names(validate(c), "reaction_vanishes_at_zero", "f(t,x,0) != 0"));
    }
    SUBCASE("unbounded growth") {
        ProblemConfig c = fisher_config();
        c.reaction = ReactionSpec::polynomial({0.0, 1.0, 1.0});
        CHECK(names(validate(c), "reaction_bounded"));
    }
    SUBCASE("nonpositive parameters") {
        ProblemConfig c = fisher_config();
        c.d = 0.0;
        c.mu = -1.0;
        const ValidationResult r = validate(c);
        CHECK(std::count_if(r.violations.begin(), r.violations.end(),
                            [](const Violation& v) { return v.hypothesis == "parameters"; }) == 2);
    }
    SUBCASE("validate_or_throw") {
        ProblemConfig c = fisher_config();
        c.T = 0.0;
        CHECK_THROWS_AS(validate_or_throw(c), Error);
    }
}

TEST_CASE("custom polynomial bound") {
    ProblemConfig c = fisher_config();
    c.reaction = ReactionSpec::polynomial({0.0, 2.0, 0.0, -0.5});
    const ValidationResult r = validate(c);
    REQUIRE(r.ok());
    // f(u) = 2u - u^3 / 2 <= 0 for u >= 2.
    CHECK(r.value->K() == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("reaction evaluation") {
    const ReactionSpec f = ReactionSpec::fisher_kpp(1.0, 1.0);
    CHECK(f.eval(0.0, 0.0, 0.5) == doctest::Approx(0.25));
    CHECK(f.eval(0.0, 0.0, 2.0) == doctest::Approx(-2.0));
    CHECK(f.eval(0.0, 0.0, 0.0) == 0.0);
    CHECK(ReactionSpec::zero().eval(0.0, 0.0, 7.0) == 0.0);
    for (double u = 1.01; u < 10.0; u += 0.37) CHECK(f.eval(0.0, 0.0, u) <= 0.0);
    try {
        (void)f.eval(0.0, 0.0, -1e-3);
        FAIL("expected NegativeDensity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeDensity);
    }
}

TEST_CASE("initial profiles") {
    const InitialDataSpec q = InitialDataSpec::quadratic_bump(1.0, 1.0);
    CHECK(q.eval(0.0) == doctest::Approx(1.0));
    CHECK(q.eval(1.0) == 0.0);
    CHECK(q.eval(-1.0) == 0.0);
    CHECK(q.eval(2.0) == 0.0);
    CHECK(q.eval(0.3) == doctest::Approx(0.91));
    const InitialDataSpec c = InitialDataSpec::cosine_bump(2.0, 0.5);
    for (double x : {0.05, 0.2, 0.45}) {
        CHECK(q.eval(x) == q.eval(-x));
        CHECK(c.eval(x) == c.eval(-x));
    }
    // |v0'(+-h0)| = 2 V / h0 for the quadratic bump.
    const double h = 1e-6;
    CHECK((q.eval(-1.0 + h) - q.eval(-1.0)) / h == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("json round trip and file loading") {
    ProblemConfig c = fisher_config();
    c.d = 0.5;
    c.alpha = 0.3;
    const ProblemConfig back = problem_from_json(problem_to_json(c));
    CHECK(back.d == 0.5);
    CHECK(back.reaction.family == ReactionSpec::Family::fisher_kpp);
    CHECK(back.reaction.a == 1.0);
    CHECK(back.initial.V == 1.0);
    REQUIRE(back.alpha.has_value());
    CHECK(*back.alpha == 0.3);

    const auto path = std::filesystem::temp_directory_path() / "fbplab_problem.json";
    {
        std::ofstream out(path);
        out << R"({"d": 1, "mu": 2, "h0": 1, "T": 0.5,
                   "reaction": {"family": "fisher_kpp", "a": 1, "b": 1},
                   "initial": {"family": "quadratic_bump", "V": 1}})";
    }
    const ProblemConfig loaded = load_problem(path);
    CHECK(loaded.mu == 2.0);
    CHECK(loaded.T == 0.5);
    CHECK(validate(loaded).ok());
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_problem(path), Error);
    CHECK_THROWS_AS(problem_from_json(nlohmann::json{{"reaction", {{"family", "bogus"}}}}), Error);
}

}
