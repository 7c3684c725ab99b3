#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "deepprior/gamma_functions.hpp"
#include "deepprior/linear_prior.hpp"
#include "deepprior/network_spec.hpp"
#include "deepprior/quadrature.hpp"

using namespace deepprior;
using Catch::Approx;

namespace {

NetworkSpec lin(std::vector<int> widths, double kappa = 1.0) {
    return make_spec(std::move(widths), Activation::linear,
                     KappaMode::explicit_kappa, kappa);
}

double rel(double got, double want) {
    return std::fabs(got - want) / std::fabs(want);
}

}  // namespace

TEST_CASE("depth 1 is the plain Gaussian", "[linear]") {
    const auto spec = lin({2}, 0.7);
    const double k2 = 0.49;
    for (double r : {0.0, 0.5, 3.0}) {
        const double want = std::exp(-0.5 * r * r / k2) / (2.0 * kPi * k2);
        CHECK(density_linear(spec, r).value == Approx(want).epsilon(1e-13));
    }
    CHECK(charfun_linear(spec, 2.0).value ==
          Approx(std::exp(-0.5 * k2 * 4.0)).epsilon(1e-13));
}

// Frozen from mpmath: (4 pi)^{-1/2} (2/Gamma(1.5)) (1/2) K_1(1).
TEST_CASE("depth-2 closed form matches the frozen reference", "[linear]") {
    CHECK(rel(density_two_layer(lin({3, 1}), 1.0).value, 0.19159302193728242904) <
          1e-12);
}

TEST_CASE("depth-2 closed form agrees with the contour route", "[linear]") {
    const std::vector<std::vector<int>> specs = {{1, 1}, {3, 1}, {5, 2}, {100, 1}};
    for (const auto& w : specs) {
        const auto spec = lin(w, 0.8);
        for (double r : {0.05, 0.7, 2.0, 6.0}) {
            CAPTURE(w[0], w[1], r);
            const auto cf = density_two_layer(spec, r);
            const auto mb = density_linear_meijer(spec, r);
            CHECK(rel(mb.value, cf.value) < 1e-9);
        }
    }
}

TEST_CASE("depth-2 characteristic closed form agrees with the contour route",
          "[linear]") {
    for (int n1 : {1, 4, 9}) {
        const auto spec = lin({n1, 2}, 1.3);
        for (double q : {0.1, 1.0, 5.0}) {
            CAPTURE(n1, q);
            const double closed = charfun_linear(spec, q).value;
            const double contour = charfun_linear_meijer(spec, q).value;
            CHECK(rel(contour, closed) < 1e-10);
        }
    }
}

// Frozen from mpmath meijerg: depth 3, widths (5,5,1), kappa = 1.
TEST_CASE("depth-3 density and charfun match frozen references", "[linear]") {
    const auto spec = lin({5, 5, 1});
    CHECK(rel(density_linear(spec, 1.0).value, 0.10253230808810606447) < 1e-10);
    CHECK(rel(charfun_linear(spec, 1.0).value, 0.037122844523815248294) < 1e-10);
    CHECK(charfun_linear(spec, 0.0).value == 1.0);
}

TEST_CASE("origin behavior: divergence exactly when a hidden width is small",
          "[linear]") {
    // min hidden <= n_d diverges.
    CHECK(density_linear(lin({1, 2}), 0.0).divergent);
    CHECK(density_linear(lin({2, 2}), 0.0).divergent);
    CHECK(density_linear(lin({2, 3, 1}), 0.0).divergent == false);
    CHECK(density_linear(lin({1, 3, 1}), 0.0).divergent);
    // Finite case has the Gamma-product value.
    const auto spec = lin({3, 1});
    const auto at0 = density_linear(spec, 0.0);
    CHECK(!at0.divergent);
    // gamma_2 (4 pi kappa^2)^{-1/2} Gamma(1):
    const double want = std::exp(-log_gamma(1.5)) / std::sqrt(4.0 * kPi);
    CHECK(at0.value == Approx(want).epsilon(1e-12));
}

TEST_CASE("norm moments: closed second moment and Gamma-ratio ladder", "[linear]") {
    const auto spec = lin({4, 7, 2}, 0.9);
    CHECK(moment_norm_linear(spec, 0.0) == 1.0);
    CHECK(moment_norm_linear(spec, 2.0) ==
          Approx(0.81 * 4 * 7 * 2).epsilon(1e-14));
    // Depth 1, width 1: E|h|^4 = 3 kappa^4.
    CHECK(moment_norm_linear(lin({1}, 0.5), 4.0) ==
          Approx(3.0 * 0.0625).epsilon(1e-12));
    // General path at m=2 agrees with the closed form.
    CHECK(rel(std::exp(log_moment_norm_linear(spec, 2.0)),
              moment_norm_linear(spec, 2.0)) < 1e-13);
}

// E||h||^2 recomputed as the radial integral of the density itself.
TEST_CASE("density integrates to the closed-form moments", "[linear]") {
    const auto spec = lin({5, 5, 1});
    auto integrand = [&](double m) {
        return [&spec, m](double r) {
            // n_d = 1: the radial density counts both half-lines.
            return 2.0 * std::pow(r, m) * density_linear(spec, r).value;
        };
    };
    QuadratureConfig qcfg;
    qcfg.rel_tol = 1e-9;
    const double mass = integrate_left_singular(integrand(0.0), 0.0, 1.0, qcfg).value +
                        integrate_tail(integrand(0.0), 1.0, 2.0, qcfg).value;
    CHECK(mass == Approx(1.0).epsilon(1e-7));
    const double m2 = integrate_left_singular(integrand(2.0), 0.0, 1.0, qcfg).value +
                      integrate_tail(integrand(2.0), 1.0, 2.0, qcfg).value;
    CHECK(m2 == Approx(moment_norm_linear(spec, 2.0)).epsilon(1e-6));
}

TEST_CASE("marginal of one output component", "[linear]") {
    const auto spec = lin({3, 2}, 1.1);
    // Same law as the output-width-1 stack.
    const auto direct = density_linear(lin({3, 1}, 1.1), 0.75);
    CHECK(marginal_density_1d(spec, 0.75).value == Approx(direct.value));
    CHECK(marginal_density_1d(spec, -0.75).value == Approx(direct.value));
    // Its second moment is E||h||^2 / n_d.
    auto g = [&](double h) {
        return 2.0 * h * h * marginal_density_1d(spec, h).value;
    };
    QuadratureConfig qcfg;
    qcfg.rel_tol = 1e-9;
    const double m2 = integrate_left_singular(g, 0.0, 1.0, qcfg).value +
                      integrate_tail(g, 1.0, 2.0, qcfg).value;
    CHECK(m2 == Approx(moment_norm_linear(spec, 2.0) / 2.0).epsilon(1e-6));
}

TEST_CASE("kappa modes set the advertised scale", "[linear]") {
    const auto spec = make_spec({4, 9, 1}, Activation::linear,
                                KappaMode::unit_variance_linear);
    // kappa^2 = 1/36, so E||h||^2 = kappa^2 * 36 * 1 = 1.
    CHECK(moment_norm_linear(spec, 2.0) == Approx(1.0).epsilon(1e-13));
    const auto relu_scaled =
        make_spec({4, 9, 1}, Activation::relu, KappaMode::unit_variance_relu);
    const auto c = prior_constants(relu_scaled);
    CHECK(c.kappa * c.kappa == Approx(4.0 / 36.0).epsilon(1e-13));
}

TEST_CASE("spec validation rejects malformed networks", "[linear]") {
    NetworkSpec bad;
    bad.widths = {3, 0};
    bad.weight_std = {1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.widths = {3, 2};
    bad.weight_std = {1.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.weight_std = {1.0, -1.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(density_linear(lin({3, 1}), -0.5), DomainError);
    CHECK_THROWS_AS(density_linear_meijer(lin({3}), 1.0), ConfigError);
}
