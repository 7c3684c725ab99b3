#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "deepprior/bessel.hpp"
#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"
#include "deepprior/nested_integral.hpp"
#include "deepprior/quadrature.hpp"

using namespace deepprior;
using Catch::Approx;

namespace {
double rel(double got, double want) {
    return std::fabs(got - want) / std::fabs(want);
}
}  // namespace

// One level is a Laplace-type Bessel integral:
//   f_1(z; nu) = 2 z^{nu/2} K_nu(2 sqrt(z)).
TEST_CASE("single-level nested integral matches Bessel K", "[nested]") {
    CHECK(rel(f_q_nested(1.0, {0.5}).value, 0.23987554393612289474) < 1e-10);
    for (double nu : {0.5, 2.0, 10.0}) {
        FqEvaluator fq({nu});
        for (double z : {0.01, 1.0, 100.0}) {
            CAPTURE(nu, z);
            const double want =
                2.0 * std::pow(z, 0.5 * nu) * bessel_k(nu, 2.0 * std::sqrt(z)).value;
            CHECK(rel(fq(z).value, want) < 1e-9);
        }
    }
}

// Frozen from mpmath meijerg at 30 digits.
TEST_CASE("nested integral matches frozen multi-level references", "[nested]") {
    CHECK(rel(f_q_nested(1.0, {0.5, 2.5}).value, 0.59999259911622013973) < 1e-9);
    CHECK(rel(f_q_nested(10.0, {1.5, 1.0, 0.5}).value, 0.019451010546424166514) < 1e-9);
}

// int_0^inf z^{s-1} f_q(z) dz = Gamma(s) prod_j Gamma(nu_j + s): integrate
// the oracle numerically and compare with the Gamma product.
TEST_CASE("nested integral has the right Mellin transform", "[nested]") {
    const std::vector<double> nus = {0.5, 1.5};
    FqEvaluator fq(nus);
    for (double s : {1.0, 2.5}) {
        CAPTURE(s);
        auto g = [&](double z) { return std::pow(z, s - 1.0) * fq(z).value; };
        QuadratureConfig qcfg;
        qcfg.rel_tol = 1e-9;
        const double head = integrate_left_singular(g, 0.0, 1.0, qcfg).value;
        const double tail = integrate_tail(g, 1.0, 2.0, qcfg).value;
        double want = log_gamma(s);
        for (double nu : nus) want += log_gamma(nu + s);
        CHECK(rel(head + tail, std::exp(want)) < 1e-6);
    }
}

TEST_CASE("nested integral at zero decouples into Gamma factors", "[nested]") {
    CHECK(f_q_nested(0.0, {0.5, 1.5}).value ==
          Approx(std::exp(log_gamma(0.5) + log_gamma(1.5))).epsilon(1e-13));
    CHECK_THROWS_AS(f_q_nested(0.0, {-0.5, 1.0}), DivergenceError);
    // Negative shifts are fine away from zero.
    CHECK(std::isfinite(f_q_nested(1.0, {-0.5, 1.0}).value));
    CHECK_THROWS_AS(f_q_nested(-1.0, {0.5}), DomainError);
}

TEST_CASE("nested integral is symmetric in its shifts", "[nested]") {
    const double a = f_q_nested(3.0, {0.5, 2.0, 1.0}).value;
    const double b = f_q_nested(3.0, {1.0, 0.5, 2.0}).value;
    CHECK(rel(a, b) < 1e-9);
}

TEST_CASE("zero levels reduce to a plain exponential", "[nested]") {
    CHECK(f_q_nested(1.0, {}).value == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(f_q_nested(0.0, {}).value == 1.0);
}
