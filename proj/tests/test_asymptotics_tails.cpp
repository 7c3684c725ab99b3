#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "deepprior/asymptotics.hpp"
#include "deepprior/linear_prior.hpp"
#include "deepprior/network_spec.hpp"
#include "deepprior/tails.hpp"

using namespace deepprior;
using Catch::Approx;

namespace {

NetworkSpec unit_spec(std::vector<int> widths, Activation act) {
    return make_spec(std::move(widths), act,
                     act == Activation::relu ? KappaMode::unit_variance_relu
                                             : KappaMode::unit_variance_linear);
}

}  // namespace

TEST_CASE("width-scaled view recovers varkappa", "[asymptotics]") {
    const auto ws = WidthScaledSpec::from_spec(
        unit_spec({4, 9, 1}, Activation::linear));
    CHECK(ws.varkappa == Approx(1.0).epsilon(1e-13));
    const auto wr =
        WidthScaledSpec::from_spec(unit_spec({4, 9, 1}, Activation::relu));
    CHECK(wr.varkappa == Approx(std::sqrt(4.0)).epsilon(1e-13));
}

TEST_CASE("Gaussian limit is the depth-1 density at the limiting variance",
          "[asymptotics]") {
    const auto ws = WidthScaledSpec::from_spec(
        unit_spec({50, 50, 2}, Activation::linear));
    const auto ref = make_spec({2}, Activation::linear,
                               KappaMode::explicit_kappa, ws.varkappa);
    for (double r : {0.0, 1.0, 2.5}) {
        CHECK(gaussian_limit_density(ws, r) ==
              Approx(density_linear(ref, r).value).epsilon(1e-12));
    }
    // ReLU variance picks up the 2^{1-d} factor; unit-variance scaling
    // makes both limits standard normal.
    const auto wr =
        WidthScaledSpec::from_spec(unit_spec({50, 50, 2}, Activation::relu));
    for (double r : {0.0, 1.0}) {
        CHECK(gaussian_limit_density(wr, r) ==
              Approx(gaussian_limit_density(ws, r)).epsilon(1e-12));
    }
}

TEST_CASE("fourth cumulant shrinks like the inverse width", "[asymptotics]") {
    const auto w10 = WidthScaledSpec::from_spec(unit_spec({10, 1}, Activation::linear));
    const auto w20 = WidthScaledSpec::from_spec(unit_spec({20, 1}, Activation::linear));
    // 3 varkappa^4 ((n+2)/n - 1) = 6 varkappa^4 / n.
    CHECK(fourth_cumulant_linear(w10) == Approx(0.6).epsilon(1e-12));
    CHECK(fourth_cumulant_linear(w20) == Approx(0.3).epsilon(1e-12));
    // Depth 1 has no hidden layers: exactly Gaussian, zero cumulant.
    const auto d1 = WidthScaledSpec::from_spec(unit_spec({3}, Activation::linear));
    CHECK(fourth_cumulant_linear(d1) == 0.0);
}

TEST_CASE("Edgeworth correction is exactly linear in sum(1/n)", "[asymptotics]") {
    const auto w50 = WidthScaledSpec::from_spec(unit_spec({50, 1}, Activation::linear));
    const auto w100 =
        WidthScaledSpec::from_spec(unit_spec({100, 1}, Activation::linear));
    for (double r : {0.3, 1.0, 2.2}) {
        const double d50 = edgeworth_density(w50, r).value - gaussian_limit_density(w50, r);
        const double d100 =
            edgeworth_density(w100, r).value - gaussian_limit_density(w100, r);
        CAPTURE(r);
        CHECK(d50 == Approx(2.0 * d100).epsilon(1e-9));
    }
}

TEST_CASE("Edgeworth bracket dips negative only in the advertised window",
          "[asymptotics]") {
    // widths (1,1): c S = 1/4, bracket = 1 + (u^2 - 6u + 3)/4, negative
    // around u = 3.
    const auto ws = WidthScaledSpec::from_spec(unit_spec({1, 1}, Activation::linear));
    const double v = ws.varkappa * ws.varkappa;
    CHECK(edgeworth_density(ws, 0.0).negative == false);
    CHECK(edgeworth_density(ws, std::sqrt(3.0 * v)).negative);
    CHECK(edgeworth_density(ws, std::sqrt(40.0 * v)).negative == false);
    CHECK_THROWS_AS(edgeworth_density(ws, -1.0), DomainError);
}

TEST_CASE("depth-1 Edgeworth is exactly the Gaussian", "[asymptotics]") {
    const auto d1 = WidthScaledSpec::from_spec(unit_spec({2}, Activation::linear));
    for (double r : {0.0, 1.0, 3.0}) {
        const auto e = edgeworth_density(d1, r);
        CHECK(e.value == Approx(gaussian_limit_density(d1, r)).epsilon(1e-14));
        CHECK(!e.negative);
    }
}

TEST_CASE("root moment curve grows and the slope finds d/2", "[tails]") {
    std::vector<double> orders;
    for (int m = 2; m <= 400; m += 2) orders.push_back(m);
    for (int d : {1, 2, 3}) {
        for (Activation act : {Activation::linear, Activation::relu}) {
            std::vector<int> widths(d, 2);
            widths.back() = 1;
            const auto spec = unit_spec(widths, act);
            const auto curve = root_moment_curve(spec, orders);
            for (std::size_t i = 1; i < curve.size(); ++i) {
                REQUIRE(curve[i].second > curve[i - 1].second);
            }
            const auto est = estimate_tail_parameter(curve);
            CAPTURE(d, act == Activation::relu);
            CHECK(std::fabs(est.theta_hat - 0.5 * d) < 0.05);
            CHECK(est.orders_used >= 5);
        }
    }
}

TEST_CASE("tail estimator needs enough high orders", "[tails]") {
    const auto spec = unit_spec({2, 1}, Activation::linear);
    const auto curve = root_moment_curve(spec, {2, 4, 6, 8});
    CHECK_THROWS_AS(estimate_tail_parameter(curve), ConfigError);
    CHECK_THROWS_AS(root_moment_curve(spec, {0.0}), ConfigError);
}

TEST_CASE("ReLU layer factors sit inside the chi bracket", "[tails]") {
    const auto spec = unit_spec({2, 5, 1}, Activation::relu);
    const auto checks = relu_moment_bounds_check(spec, {2.0, 10.0, 40.0});
    REQUIRE(checks.size() == 6);
    for (const auto& c : checks) {
        CAPTURE(c.width, c.order);
        CHECK(c.pass);
        CHECK(c.lower <= c.upper);
    }
}
