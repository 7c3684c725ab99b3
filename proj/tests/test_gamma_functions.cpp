#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"

using namespace deepprior;
using Catch::Approx;

namespace {
using cplx = std::complex<double>;

double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / std::abs(want);
}
}  // namespace

// Reference values computed with mpmath at 30 digits.
TEST_CASE("complex log-gamma matches high-precision references", "[gamma]") {
    struct Case {
        cplx z, want;
    };
    const Case cases[] = {
        {{2.0, 3.0}, {-2.0928517530927333496, 2.3023965434668676262}},
        {{-2.5, 1.5}, {-3.7175134511917918462, -7.713065525834192526}},
        {{-0.5, -0.25}, {1.0133816533627673936, 3.1303395936331459364}},
        {{0.5, 200.0}, {-313.2403268257746511, 859.66368164324449067}},
        {{-10.25, 0.5}, {-15.417538111779604855, -32.627495417936077699}},
        {{0.1, 0.1}, {1.8989912736759001615, -0.82746470777307574554}},
    };
    for (const auto& c : cases) {
        CAPTURE(c.z.real(), c.z.imag());
        CHECK(rel_err(log_gamma(c.z), c.want) < 1e-13);
    }
}

TEST_CASE("real log-gamma agrees with references", "[gamma]") {
    CHECK(log_gamma(101.0) == Approx(363.73937555556349014).epsilon(1e-14));
    CHECK(log_gamma(0.5) == Approx(0.57236494292470008707).epsilon(1e-14));
    CHECK(log_gamma(1.0) == Approx(0.0).margin(1e-15));
    CHECK(log_gamma(2.0) == Approx(0.0).margin(1e-15));
}

TEST_CASE("log-gamma satisfies the recurrence and conjugation", "[gamma]") {
    const cplx zs[] = {{0.3, 0.7}, {-1.2, 2.5}, {5.0, -40.0}, {-7.7, 0.01}};
    for (cplx z : zs) {
        CAPTURE(z.real(), z.imag());
        // Gamma(z+1) = z Gamma(z); branches may differ by 2 pi i, so
        // compare exponentials.
        const cplx delta = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
        CHECK(std::abs(std::exp(delta) - 1.0) < 1e-12);
        const cplx conj_diff = log_gamma(std::conj(z)) - std::conj(log_gamma(z));
        CHECK(std::abs(conj_diff) < 1e-12);
    }
}

TEST_CASE("log-gamma rejects the poles", "[gamma]") {
    CHECK_THROWS_AS(log_gamma(cplx{0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(log_gamma(cplx{-3.0, 0.0}), DomainError);
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-2.0), DomainError);
}

TEST_CASE("digamma and trigamma match references", "[gamma]") {
    // psi(1) = -euler_gamma, psi(1/2) = -euler_gamma - 2 ln 2.
    CHECK(digamma(1.0) == Approx(-0.57721566490153286061).epsilon(1e-13));
    CHECK(digamma(0.5) == Approx(-1.9635100260214234794).epsilon(1e-13));
    CHECK(digamma(10.25) == Approx(2.2777047906867239693).epsilon(1e-13));
    CHECK(digamma(0.1) == Approx(-10.423754940411076795).epsilon(1e-13));
    // psi'(1) = pi^2/6, psi'(1/2) = pi^2/2.
    CHECK(trigamma(1.0) == Approx(1.6449340668482264365).epsilon(1e-13));
    CHECK(trigamma(0.5) == Approx(4.9348022005446793094).epsilon(1e-13));
    CHECK(trigamma(10.25) == Approx(0.10247452151799186680).epsilon(1e-13));
    CHECK_THROWS_AS(digamma(0.0), DomainError);
    CHECK_THROWS_AS(trigamma(-1.0), DomainError);
}

TEST_CASE("binomial and rising-factorial helpers", "[gamma]") {
    CHECK(std::exp(log_binomial(7, 3)) == Approx(35.0).epsilon(1e-13));
    CHECK(log_binomial(100, 12) == Approx(34.587967479754682050).epsilon(1e-13));
    CHECK(log_binomial(5, 0) == Approx(0.0).margin(1e-15));
    CHECK(log_binomial(5, 5) == Approx(0.0).margin(1e-15));
    // (3.5)_{2.5} = Gamma(6)/Gamma(3.5).
    CHECK(log_rising(3.5, 2.5) == Approx(3.5865181404349717694).epsilon(1e-13));
    CHECK(log_rising(4.0, 0.0) == Approx(0.0).margin(1e-15));
}
