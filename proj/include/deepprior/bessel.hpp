// Modified and ordinary Bessel function wrappers over GSL.
//
// GSL's error handler aborts by default, which is unusable inside a library,
// so every call goes through the *_e variants with the handler disabled once
// per process.  K_nu is evaluated as ln K_nu(x), which stays finite far
// beyond the double underflow point; the unscaled value carries an explicit
// underflow flag instead of silently degrading.

#pragma once

#include <cmath>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "deepprior/errors.hpp"

namespace deepprior {

namespace detail {

inline void disable_gsl_abort() {
    static const auto once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

}  // namespace detail

struct BesselKValue {
    double value;        // K_nu(x); 0.0 when underflowed
    double log_value;    // ln K_nu(x), finite far past the underflow point
    bool underflowed;    // true when K_nu(x) is too small for a double
};

// K_nu(x) for real order.  K_{-nu} = K_nu, so the order is folded to nu >= 0.
inline BesselKValue bessel_k(double nu, double x) {
    detail::disable_gsl_abort();
    if (!(x > 0.0)) {
        throw DomainError("bessel_k: requires x > 0, got " + std::to_string(x));
    }
    nu = std::fabs(nu);
    gsl_sf_result ln_k;
    const int status = gsl_sf_bessel_lnKnu_e(nu, x, &ln_k);
    if (status != GSL_SUCCESS) {
        throw AccuracyError("bessel_k: GSL lnKnu failed for nu=" + std::to_string(nu) +
                                " x=" + std::to_string(x),
                            0.0, 1.0);
    }
    BesselKValue out;
    out.log_value = ln_k.val;
    out.value = std::exp(ln_k.val);
    out.underflowed = (out.value == 0.0);
    return out;
}

// J_nu(x) for x >= 0.  Half-integer orders -1/2 and 1/2 take the closed
// trigonometric forms (GSL's general Jnu requires nu >= 0, and the inverse
// transform of a one-dimensional density needs nu = -1/2).
inline double bessel_j(double nu, double x) {
    detail::disable_gsl_abort();
    if (x < 0.0) {
        throw DomainError("bessel_j: requires x >= 0");
    }
    if (nu == -0.5) {
        if (x == 0.0) {
            throw DomainError("bessel_j: order -1/2 diverges at x = 0");
        }
        return std::sqrt(2.0 / (M_PI * x)) * std::cos(x);
    }
    if (x == 0.0) {
        return nu == 0.0 ? 1.0 : 0.0;
    }
    if (nu == 0.5) {
        return std::sqrt(2.0 / (M_PI * x)) * std::sin(x);
    }
    gsl_sf_result res;
    int status;
    if (nu == std::floor(nu)) {
        status = gsl_sf_bessel_Jn_e(static_cast<int>(nu), x, &res);
    } else {
        if (nu < 0.0) {
            throw DomainError("bessel_j: negative non-half-integer order unsupported");
        }
        status = gsl_sf_bessel_Jnu_e(nu, x, &res);
    }
    if (status == GSL_EUNDRFLW) {
        return 0.0;
    }
    if (status != GSL_SUCCESS) {
        throw AccuracyError("bessel_j: GSL failed for nu=" + std::to_string(nu) +
                                " x=" + std::to_string(x),
                            0.0, 1.0);
    }
    return res.val;
}

// k-th positive zero of J_nu, by McMahon's expansion.  Used only to place
// oscillation-aligned segment boundaries, so moderate accuracy suffices.
inline double bessel_j_zero(double nu, int k) {
    const double mu = 4.0 * nu * nu;
    const double beta = (k + 0.5 * nu - 0.25) * M_PI;
    const double b8 = 8.0 * beta;
    double z = beta - (mu - 1.0) / b8;
    z -= 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
    return z;
}

}  // namespace deepprior
