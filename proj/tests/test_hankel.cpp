#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "deepprior/hankel.hpp"
#include "deepprior/linear_prior.hpp"
#include "deepprior/network_spec.hpp"

using namespace deepprior;
using Catch::Approx;

namespace {
constexpr double kTwoPi = 6.283185307179586477;
}

// The standard Gaussian is its own transform up to the (2 pi)^{n/2}
// convention: p = N(0, I_n) radial profile  ->  phi(q) = exp(-q^2/2).
TEST_CASE("Gaussian maps to Gaussian in every dimension", "[hankel]") {
    for (int n : {1, 2, 3}) {
        auto p = [n](double r) {
            return std::exp(-0.5 * r * r) / std::pow(kTwoPi, 0.5 * n);
        };
        for (double q : {0.0, 1.0, 2.5}) {
            CAPTURE(n, q);
            const double got =
                hankel_radial_point(p, n, HankelDirection::forward, q);
            CHECK(got == Approx(std::exp(-0.5 * q * q)).epsilon(1e-8));
        }
        auto phi = [](double q) { return std::exp(-0.5 * q * q); };
        for (double r : {0.0, 1.0}) {
            CAPTURE(n, r);
            const double got =
                hankel_radial_point(phi, n, HankelDirection::inverse, r);
            CHECK(got == Approx(p(r)).epsilon(1e-8));
        }
    }
}

// Inverse transform of the depth-2 closed-form characteristic function
// must land on the depth-2 closed-form density: two independent closed
// forms joined by numerical Fourier inversion.
TEST_CASE("depth-2 characteristic function inverts to the density", "[hankel]") {
    const auto spec = make_spec({3, 2}, Activation::linear, KappaMode::explicit_kappa, 1.0);
    auto phi = [&](double q) { return charfun_linear(spec, q).value; };
    for (double r : {0.5, 1.0, 2.0}) {
        CAPTURE(r);
        const double got = hankel_radial_point(phi, 2, HankelDirection::inverse, r);
        const double want = density_two_layer(spec, r).value;
        CHECK(got == Approx(want).epsilon(1e-6));
    }
}

// Forward transform of the density likewise recovers the charfun, heavy
// tail and origin singularity included (n_1 = 1 gives a log-divergent
// density at 0: the u-substitution segment has to absorb it).
TEST_CASE("depth-2 density transforms to the characteristic function", "[hankel]") {
    const auto spec = make_spec({1, 2}, Activation::linear, KappaMode::explicit_kappa, 1.0);
    auto p = [&](double r) { return density_two_layer(spec, r).value; };
    for (double q : {0.0, 0.7, 2.0}) {
        CAPTURE(q);
        const double got = hankel_radial_point(p, 2, HankelDirection::forward, q);
        const double want = charfun_linear(spec, q).value;
        CHECK(got == Approx(want).epsilon(2e-6));
    }
}

TEST_CASE("transform validates inputs", "[hankel]") {
    auto f = [](double) { return 0.0; };
    CHECK_THROWS_AS(hankel_radial_point(f, 0, HankelDirection::forward, 1.0),
                    ConfigError);
    CHECK_THROWS_AS(hankel_radial_point(f, 2, HankelDirection::forward, -1.0),
                    DomainError);
}

TEST_CASE("grid helper matches pointwise evaluation", "[hankel]") {
    auto phi = [](double q) { return std::exp(-0.5 * q * q); };
    const std::vector<double> grid = {0.0, 0.5, 1.5};
    const auto out = hankel_radial(phi, 2, HankelDirection::inverse, grid);
    REQUIRE(out.size() == 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(out[i] ==
              Approx(hankel_radial_point(phi, 2, HankelDirection::inverse, grid[i])));
    }
}
