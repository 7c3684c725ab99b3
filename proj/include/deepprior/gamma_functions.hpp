// Log-gamma machinery: real log-gamma, principal-branch complex log-gamma,
// digamma, and small combinatorial helpers built on them.
//
// The complex log-gamma is the analytic continuation that is real on the
// positive axis (not the principal logarithm of Gamma), evaluated by the
// Stirling series after an upward recurrence shift, with reflection into
// Re z >= 0.5.  Everything the Mellin-Barnes integrand needs stays in log
// space, so values for arguments with huge real parts never overflow.

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "deepprior/errors.hpp"

namespace deepprior {

namespace detail {

// B_{2k} / (2k (2k-1)) for k = 1..12.  Stirling series coefficients of
// 1/z^{2k-1}.  Exact-rational numerators over denominators, evaluated once.
inline constexpr double kStirling[12] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
};

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2 pi)/2

// Stirling series for |z| >= 10, Re z > 0.
inline std::complex<double> log_gamma_stirling(std::complex<double> z) {
    const std::complex<double> lz = std::log(z);
    std::complex<double> res = (z - 0.5) * lz - z + kHalfLog2Pi;
    const std::complex<double> rz2 = 1.0 / (z * z);
    std::complex<double> zpow = 1.0 / z;
    for (double c : kStirling) {
        res += c * zpow;
        zpow *= rz2;
    }
    return res;
}

// log(sin(pi z)) on the branch that makes the reflection formula reproduce
// the analytic continuation of log-gamma.  Requires Im z >= 0.
inline std::complex<double> log_sin_pi_upper(std::complex<double> z) {
    const std::complex<double> i_pi(0.0, M_PI);
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}), |e^{2 pi i z}| < 1.
    const std::complex<double> log_i_half(-M_LN2, M_PI_2);
    return log_i_half - i_pi * z + std::log(1.0 - std::exp(2.0 * i_pi * z));
}

}  // namespace detail

// Principal-branch complex log-gamma.  Poles at the nonpositive integers.
inline std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        throw DivergenceError("log_gamma: pole at nonpositive integer " +
                              std::to_string(z.real()));
    }
    if (z.imag() < 0.0) {
        return std::conj(log_gamma(std::conj(z)));
    }
    if (z.real() < 0.5) {
        // Reflection into the right half plane.
        const std::complex<double> log_pi(std::log(M_PI), 0.0);
        return log_pi - detail::log_sin_pi_upper(z) - log_gamma(1.0 - z);
    }
    std::complex<double> shift(0.0, 0.0);
    while (std::abs(z) < 10.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    return detail::log_gamma_stirling(z) + shift;
}

// Real log-gamma.  For x > 0 this is ln Gamma(x); for negative non-integer
// x it is ln |Gamma(x)|, matching std::lgamma.
inline double log_gamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) {
        throw DivergenceError("log_gamma: pole at nonpositive integer " +
                              std::to_string(x));
    }
    return std::lgamma(x);
}

// Digamma for x > 0, via upward recurrence and the asymptotic series.
inline double digamma(double x) {
    if (x <= 0.0) {
        throw DomainError("digamma: requires x > 0, got " + std::to_string(x));
    }
    double res = 0.0;
    while (x < 16.0) {
        res -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ ln x - 1/(2x) - sum B_{2k} / (2k x^{2k})
    const double r2 = 1.0 / (x * x);
    static constexpr double kPsi[6] = {
        -1.0 / 12.0, 1.0 / 120.0, -1.0 / 252.0,
        1.0 / 240.0, -1.0 / 132.0, 691.0 / 32760.0,
    };
    double pw = r2;
    double tail = 0.0;
    for (double c : kPsi) {
        tail += c * pw;
        pw *= r2;
    }
    return res + std::log(x) - 0.5 / x + tail;
}

// Trigamma for x > 0 (derivative of digamma); used for curvature estimates.
inline double trigamma(double x) {
    if (x <= 0.0) {
        throw DomainError("trigamma: requires x > 0, got " + std::to_string(x));
    }
    double res = 0.0;
    while (x < 16.0) {
        res += 1.0 / (x * x);
        x += 1.0;
    }
    // psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2k} / x^{2k+1}
    const double r2 = 1.0 / (x * x);
    static constexpr double kPsi1[5] = {
        1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    };
    double pw = r2 / x;
    double tail = 0.0;
    for (double c : kPsi1) {
        tail += c * pw;
        pw *= r2;
    }
    return res + 1.0 / x + 0.5 * r2 + tail;
}

// ln C(n, k) for integer 0 <= k <= n.
inline double log_binomial(int n, int k) {
    if (k < 0 || k > n) {
        throw DomainError("log_binomial: need 0 <= k <= n");
    }
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// ln of the rising factorial a^{(b)} = Gamma(a + b) / Gamma(a), a > 0, b >= 0.
inline double log_rising(double a, double b) {
    if (a <= 0.0) {
        throw DomainError("log_rising: requires a > 0");
    }
    return std::lgamma(a + b) - std::lgamma(a);
}

}  // namespace deepprior
