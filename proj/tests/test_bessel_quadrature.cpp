#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "deepprior/bessel.hpp"
#include "deepprior/errors.hpp"
#include "deepprior/quadrature.hpp"

using namespace deepprior;
using Catch::Approx;

// Reference values computed with mpmath at 30 digits.
TEST_CASE("modified Bessel K matches references", "[bessel]") {
    CHECK(bessel_k(0.0, 2.0).value == Approx(0.11389387274953343565).epsilon(1e-13));
    CHECK(bessel_k(0.5, 2.0).value == Approx(0.11993777196806144737).epsilon(1e-13));
    CHECK(bessel_k(3.0, 0.1).value == Approx(7990.0124304654361785).epsilon(1e-13));
    CHECK(bessel_k(100.0, 50.0).value == Approx(16394035276269.252223).epsilon(1e-12));
    CHECK(bessel_k(2.5, 1e-6).value == Approx(3759942411945874.0966).epsilon(1e-12));
    // Symmetric in the order's sign.
    CHECK(bessel_k(-3.0, 0.1).value == Approx(bessel_k(3.0, 0.1).value));
}

TEST_CASE("modified Bessel K survives underflow via the log value", "[bessel]") {
    const auto k = bessel_k(0.5, 700.0);
    // K_{1/2}(x) = sqrt(pi/2x) e^{-x}: representable only in log form.
    CHECK(k.log_value == Approx(std::log(4.6706097999361335015e-306)).epsilon(1e-12));
    CHECK(!k.underflowed);
    const auto deep = bessel_k(0.5, 1000.0);
    CHECK(deep.underflowed);
    CHECK(deep.value == 0.0);
    CHECK(std::isfinite(deep.log_value));
    CHECK_THROWS_AS(bessel_k(1.0, 0.0), DomainError);
}

TEST_CASE("Bessel J matches references", "[bessel]") {
    CHECK(bessel_j(0.0, 1.0) == Approx(0.76519768655796655145).epsilon(1e-12));
    CHECK(bessel_j(1.0, 5.0) == Approx(-0.32757913759146522204).epsilon(1e-12));
    CHECK(bessel_j(0.5, 2.0) == Approx(0.51301613656182775167).epsilon(1e-12));
    CHECK(bessel_j(-0.5, 3.0) == Approx(-0.45604882079463317885).epsilon(1e-12));
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(bessel_j(2.0, 0.0) == 0.0);
}

TEST_CASE("Bessel zero approximations segment at true sign changes", "[bessel]") {
    // Half-integer orders reduce to sin/cos, where McMahon is exact.
    CHECK(bessel_j_zero(0.5, 3) == Approx(9.4247779607693797154).epsilon(1e-13));
    CHECK(bessel_j_zero(-0.5, 1) == Approx(0.5 * 3.14159265358979323846).epsilon(1e-13));
    // Integer order: approximate, but well within a half-period, which is
    // all segmentation needs.
    CHECK(std::fabs(bessel_j_zero(0.0, 1) - 2.4048255576957727686) < 2e-3);
    CHECK(std::fabs(bessel_j_zero(0.0, 10) - 30.634606468431975118) < 1e-5);
    // Strictly increasing.
    for (int k = 1; k < 20; ++k) {
        CHECK(bessel_j_zero(0.0, k) < bessel_j_zero(0.0, k + 1));
    }
}

TEST_CASE("adaptive quadrature integrates smooth functions", "[quadrature]") {
    const auto r1 = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r1.value == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r1.converged);
    const auto r2 = integrate([](double x) { return std::sin(x); }, 0.0,
                              3.14159265358979323846);
    CHECK(r2.value == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("left-singular rule handles integrable endpoint blowups", "[quadrature]") {
    const auto r1 =
        integrate_left_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(r1.value == Approx(2.0).epsilon(1e-12));
    const auto r2 =
        integrate_left_singular([](double x) { return -std::log(x); }, 0.0, 1.0);
    CHECK(r2.value == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tail integration reaches infinity by octave doubling", "[quadrature]") {
    const auto r1 = integrate_tail([](double x) { return std::exp(-x); }, 0.0, 1.0);
    CHECK(r1.value == Approx(1.0).epsilon(1e-12));
    CHECK(r1.converged);
    const auto r2 =
        integrate_tail([](double x) { return std::exp(-0.5 * x * x); }, 0.0, 1.0);
    CHECK(r2.value == Approx(std::sqrt(0.5 * 3.14159265358979323846)).epsilon(1e-12));
    // Algebraic decay: 1/(1+x)^3 integrates to 1/2.
    const auto r3 = integrate_tail(
        [](double x) { return std::pow(1.0 + x, -3.0); }, 0.0, 1.0);
    CHECK(r3.value == Approx(0.5).epsilon(1e-10));
}

TEST_CASE("fixed-radius cutoff policy stops where told", "[quadrature]") {
    QuadratureConfig cfg;
    cfg.cutoff = CutoffPolicy::fixed_radius;
    cfg.fixed_radius = 2.0;
    const auto r = integrate_tail([](double x) { return std::exp(-x); }, 0.0, 1.0, cfg);
    CHECK(r.value == Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
}
