#include "fbplab/errors.hpp"
#include "fbplab/kernel.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using fbp::Kernel;

namespace {

// Polynomial coefficients of J on [0, 1].
const std::vector<double> epa_poly{0.75, 0.0, -0.75};
const std::vector<double> tri_poly{1.0, -1.0};
const std::vector<double> quartic_poly{15.0 / 16, 0.0, -30.0 / 16, 0.0, 15.0 / 16};

} // namespace

TEST_SUITE("kernel") {

TEST_CASE("pointwise values of the built-ins") {
    CHECK(Kernel::epanechnikov().eval(0.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(Kernel::epanechnikov().eval(1.5) == 0.0);
    CHECK(Kernel::triangle().eval(-0.5) == doctest::Approx(0.5).epsilon(1e-15));
    const Kernel q = Kernel::quartic();
    for (double z : {0.1, 0.37, 0.9}) CHECK(q.eval(z) == q.eval(-z));
    CHECK(q.eval(1.0) == 0.0);
}

TEST_CASE("moments against exact polynomial integrals") {
    const Kernel epa = Kernel::epanechnikov();
    const Kernel tri = Kernel::triangle();
    const Kernel qua = Kernel::quartic();
    for (int k = 0; k <= 4; ++k) {
        CHECK(epa.moment(k) == doctest::Approx(oracle::poly_integral01(oracle::shift(epa_poly, k))).epsilon(1e-12));
        CHECK(tri.moment(k) == doctest::Approx(oracle::poly_integral01(oracle::shift(tri_poly, k))).epsilon(1e-12));
        CHECK(qua.moment(k) ==
              doctest::Approx(oracle::poly_integral01(oracle::shift(quartic_poly, k))).epsilon(1e-12));
    }
    CHECK(std::abs(epa.moment(0) - 0.5) <= 1e-10);
    CHECK(std::abs(epa.moment(2) - 0.1) <= 1e-12);
    CHECK(std::abs(tri.moment(1) - 1.0 / 6.0) <= 1e-12);
    CHECK_THROWS_AS(epa.moment(5), fbp::Error);
}

TEST_CASE("scaling constants") {
    const Kernel epa = Kernel::epanechnikov();
    const Kernel tri = Kernel::triangle();
    const Kernel qua = Kernel::quartic();
    CHECK(std::abs(epa.c_star() - 10.0) <= 1e-10);
    CHECK(std::abs(epa.c_zero() - 16.0 / 3.0) <= 1e-10);
    CHECK(std::abs(tri.c_star() - 12.0) <= 1e-10);
    CHECK(std::abs(tri.c_zero() - 6.0) <= 1e-10);
    // int_0^1 (15/16)(1 - z^2)^2 z^2 dz = 1/14.
    const double m2 = oracle::poly_integral01(oracle::shift(quartic_poly, 2));
    CHECK(std::abs(m2 - 1.0 / 14.0) <= 1e-15);
    CHECK(std::abs(qua.c_star() - 1.0 / m2) <= 1e-10);
    CHECK(std::abs(qua.c_zero() - 6.4) <= 1e-10);
    for (const Kernel* k : {&epa, &tri, &qua}) CHECK(k->c_zero() < k->c_star());
}

TEST_CASE("scaled kernel") {
    const Kernel epa = Kernel::epanechnikov();
    CHECK(epa.scaled_eval(0.1, 0.0) == doctest::Approx(7.5).epsilon(1e-14));
    CHECK(epa.scaled_eval(0.1, 0.2) == 0.0);
    for (double eps : {0.2, 0.05}) {
        const double mass = oracle::simpson([&](double x) { return epa.scaled_eval(eps, x); }, -eps, eps, 200);
        CHECK(std::abs(mass - 1.0) <= 1e-10);
    }
    CHECK_THROWS_AS(epa.scaled_eval(0.0, 0.0), fbp::Error);
}

TEST_CASE("boundary weight") {
    const Kernel epa = Kernel::epanechnikov();
    for (const Kernel& k : {Kernel::epanechnikov(), Kernel::triangle(), Kernel::quartic()}) {
        CHECK(std::abs(k.boundary_weight(0.0) - 0.5) <= 1e-12);
        CHECK(k.boundary_weight(1.0) == doctest::Approx(0.0));
        double prev = k.boundary_weight(0.0);
        for (int i = 1; i <= 1000; ++i) {
            const double w = k.boundary_weight(i / 1000.0);
            CHECK(w <= prev);
            prev = w;
        }
        const double fubini = oracle::simpson([&](double w) { return k.boundary_weight(w); }, 0.0, 1.0, 2000);
        CHECK(std::abs(fubini * k.c_zero() - 1.0) <= 1e-8);
    }
    // int_{1/2}^1 0.75 (1 - z^2) dz
    CHECK(std::abs(epa.boundary_weight(0.5) - 0.15625) <= 1e-12);
}

TEST_CASE("tabulated kernels") {
    SUBCASE("triangle table reproduces the closed form") {
        std::vector<double> z, v;
        for (int i = 0; i <= 10; ++i) {
            z.push_back(i / 10.0);
            v.push_back(1.0 - i / 10.0);
        }
        const Kernel k = Kernel::from_table(z, v);
        CHECK(k.renormalization_factor() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(k.c_star() - 12.0) <= 1e-10);
        CHECK(std::abs(k.c_zero() - 6.0) <= 1e-10);
        CHECK(k.eval(-0.25) == doctest::Approx(0.75).epsilon(1e-14));
    }
    SUBCASE("unnormalized table is rescaled and the factor reported") {
        const Kernel k = Kernel::from_table({0.0, 1.0}, {4.0, 0.0});
        CHECK(k.renormalization_factor() == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(std::abs(k.moment(0) - 0.5) <= 1e-10);
    }
    SUBCASE("invalid tables") {
        CHECK_THROWS_AS(Kernel::from_table({0.0, 1.0}, {0.0, 1.0}), fbp::Error);
        CHECK_THROWS_AS(Kernel::from_table({0.0, 0.5, 1.5}, {1.0, 0.5, 0.0}), fbp::Error);
        CHECK_THROWS_AS(Kernel::from_table({0.0, 0.5, 0.4}, {1.0, 0.5, 0.0}), fbp::Error);
        CHECK_THROWS_AS(Kernel::from_table({0.0, 1.0}, {1.0, -0.1}), fbp::Error);
    }
    SUBCASE("kernel concentrated at the origin") {
        const Kernel k = Kernel::from_table({0.0, 1e-7, 1.0}, {1.0, 0.0, 0.0});
        try {
            (void)k.c_star();
            FAIL("expected DegenerateKernel");
        } catch (const fbp::Error& e) {
            CHECK(e.code() == fbp::ErrorCode::DegenerateKernel);
        }
    }
    SUBCASE("file loader") {
        const auto path = std::filesystem::temp_directory_path() / "fbplab_kernel_table.txt";
        {
            std::ofstream out(path);
            out << "# z, J\n0, 0.75\n0.5, 0.5625\n1.0 0\n";
        }
        const Kernel k = Kernel::from_file(path);
        CHECK(k.name() == "fbplab_kernel_table.txt");
        CHECK(std::abs(k.moment(0) - 0.5) <= 1e-10);
        CHECK(k.eval(0.25) > 0.0);
        std::filesystem::remove(path);
        CHECK_THROWS_AS(Kernel::from_file(path), fbp::Error);
    }
}

TEST_CASE("lookup by name") {
    CHECK(Kernel::by_name("triangle").name() == "triangle");
    CHECK_THROWS_AS(Kernel::by_name("no-such-kernel-file"), fbp::Error);
}

}
