#include "tfqkd/special_functions.hpp"

#include "oracles.hpp"
#include "tfqkd/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace tfqkd;

TEST_CASE("binary entropy: endpoints, symmetry, maximum") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.02) == doctest::Approx(0.141441).epsilon(1e-5));
    for (double x : {1e-7, 0.01, 0.2, 0.49})
        CHECK(binary_entropy(x) == doctest::Approx(binary_entropy(1.0 - x)).epsilon(1e-14));
    CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
}

TEST_CASE("binary entropy matches the arbitrary-precision grid") {
    for (const auto& ref : oracles::kEntropyGrid) {
        CHECK(binary_entropy(ref.x) ==
              doctest::Approx(ref.value).epsilon(1e-12));
    }
}

TEST_CASE("binary entropy is concave") {
    Rng rng(20240901);
    for (int i = 0; i < 2000; ++i) {
        const double x = rng.next_double();
        const double y = rng.next_double();
        if (x <= 0.0 || x >= 1.0 || y <= 0.0 || y >= 1.0) continue;
        const double mid = binary_entropy(0.5 * (x + y));
        const double avg = 0.5 * (binary_entropy(x) + binary_entropy(y));
        CHECK(mid >= avg - 1e-12);
    }
}

TEST_CASE("lambert w: special points") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(lambert_w0(1.0) == doctest::Approx(oracles::kW0At1).epsilon(1e-12));
    CHECK(lambert_w0(-0.2) == doctest::Approx(oracles::kW0AtMinusPoint2).epsilon(1e-12));
    CHECK(lambert_wm1(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(lambert_wm1(-0.2) == doctest::Approx(oracles::kWm1AtMinusPoint2).epsilon(1e-12));
    CHECK(lambert_wm1(-1e-30) == doctest::Approx(oracles::kWm1AtMinus1e30).epsilon(1e-12));
    CHECK_THROWS_AS(lambert_w0(-0.37), std::domain_error);
    CHECK_THROWS_AS(lambert_wm1(-0.37), std::domain_error);
    CHECK_THROWS_AS(lambert_wm1(0.1), std::domain_error);
}

TEST_CASE("lambert w: residual over 1e5 random domain samples") {
    Rng rng(7);
    auto residual = [](double w, double x) {
        return std::abs(w * std::exp(w) - x) / std::max(std::abs(x), 1e-300);
    };
    const double inv_e = std::exp(-1.0);
    double worst0 = 0.0, worst1 = 0.0;
    for (int i = 0; i < 100000; ++i) {
        // W0: spread over [-1/e, 0) u (0, 1e6]
        double x = (i % 2 == 0) ? -inv_e * rng.next_double()
                                : std::exp(rng.next_double() * 14.0 - 1.0);
        worst0 = std::max(worst0, residual(lambert_w0(x), x));
        // W-1: log-uniform in magnitude over [-1/e, 0)
        double y = -std::exp(-rng.next_double() * 60.0) * inv_e;
        worst1 = std::max(worst1, residual(lambert_wm1(y), y));
    }
    CHECK(worst0 <= 1e-12);
    CHECK(worst1 <= 1e-12);
}

TEST_CASE("lambert w: branch-point entry points agree with direct evaluation") {
    for (double t : {-1e-18, -1e-12, -1e-6, -1e-3, -0.5, -5.0}) {
        const double x = -std::exp(t - 1.0);
        const double w0 = lambert_w0_branchpoint(t);
        const double wm = lambert_wm1_branchpoint(t);
        CHECK(std::abs(w0 * std::exp(w0) - x) <= 1e-12 * std::abs(x));
        CHECK(std::abs(wm * std::exp(wm) - x) <= 1e-12 * std::abs(x));
        CHECK(w0 >= -1.0);
        CHECK(wm <= -1.0);
    }
}

TEST_CASE("bessel i0: grid, symmetry, monotonicity, overflow") {
    CHECK(bessel_i0(0.0) == 1.0);
    for (const auto& ref : oracles::kBesselGrid)
        CHECK(bessel_i0(ref.x) == doctest::Approx(ref.value).epsilon(1e-12));
    for (double z : {0.3, 3.0, 18.0, 120.0})
        CHECK(bessel_i0(z) == bessel_i0(-z));
    double prev = 1.0;
    for (double z = 0.5; z <= 30.0; z += 0.5) {
        const double v = bessel_i0(z);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(bessel_i0(701.0), std::range_error);
}

TEST_CASE("neumaier summation recovers cancelled low-order terms") {
    NeumaierSum s;
    s.add(1e16);
    for (int i = 0; i < 10; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 10.0);
}
