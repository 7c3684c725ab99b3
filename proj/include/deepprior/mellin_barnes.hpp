// Mellin-Barnes evaluation of the two Meijer G families the prior needs:
//
//   density family   G^{q,0}_{0,q}(z | -; b_1..b_q)
//       integrand  prod_j Gamma(b_j - s) * z^s,  contour left of all b_j
//
//   charfun family   G^{1,q}_{q,1}(z | a_1..a_q; 0)
//       integrand  Gamma(-s) * prod_k Gamma(1 - a_k + s) * z^s,
//       contour between the left pole ladder at max_k(a_k) - 1 and 0
//
// Both are computed on a vertical line s = c + i t.  The integrand modulus
// peaks at t = 0 and decays like exp(-(number of gamma factors) pi |t| / 2),
// so the trapezoid rule converges geometrically.  The abscissa c is placed
// at the saddle of the modulus (the solution of d/dc [c ln z +
// sum ln Gamma(.)] = 0): a fixed abscissa is mathematically equivalent but
// suffers catastrophic oscillatory cancellation once z is large, because the
// line modulus then exceeds the value of the integral by many orders.  All
// gamma products are complex log-gamma sums, and the running maximum of the
// real part is subtracted before exponentiation, so parameters in the
// hundreds stay in range.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"

namespace deepprior {

struct ContourConfig {
    // NaN selects the saddle-point abscissa automatically.
    double abscissa = std::numeric_limits<double>::quiet_NaN();
    // 0 selects adaptive truncation / step.
    double half_width = 0.0;
    double initial_step = 0.0;
    double target_rel_tol = 1e-11;
    int max_halvings = 16;
    std::size_t max_evaluations = 4'000'000;
};

struct MeijerResult {
    double value = 0.0;
    double log_abs = -std::numeric_limits<double>::infinity();
    double rel_err_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    double abscissa = 0.0;
    double half_width = 0.0;
    double step = 0.0;
};

namespace detail {

// Trapezoid refinement of (1/pi) Re int_0^T exp(L(t) - M) dt for a log
// integrand L with conjugate symmetry L(-t) = conj(L(t)).
template <class LogIntegrand>
MeijerResult contour_sum(const LogIntegrand& logL, double M, double T, double h0,
                         const ContourConfig& cfg) {
    MeijerResult out;
    auto scaled = [&](double t) {
        const std::complex<double> L = logL(t);
        const double re = L.real() - M;
        return re < -746.0 ? 0.0 : std::exp(re) * std::cos(L.imag());
    };
    // Kahan-compensated trapezoid at step h over [0, T]; endpoint t=0 gets
    // half weight (the grid mirrors to negative t by symmetry).
    double h = h0;
    std::size_t n = static_cast<std::size_t>(std::ceil(T / h));
    double sum = 0.5 * scaled(0.0);
    double comp = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double y = scaled(k * h) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    out.evaluations = n + 1;
    double prev = sum * h;
    bool converged = false;
    double cur = prev;
    for (int iter = 0; iter < cfg.max_halvings; ++iter) {
        // Refinement reuses the coarse sum: new points are the odd midpoints.
        const double hh = 0.5 * h;
        double odd = 0.0;
        comp = 0.0;
        const std::size_t m = 2 * n;
        for (std::size_t k = 1; k <= m; k += 2) {
            const double y = scaled(k * hh) - comp;
            const double t = odd + y;
            comp = (t - odd) - y;
            odd = t;
        }
        out.evaluations += m / 2 + 1;
        h = hh;
        n = m;
        sum = sum + odd;
        cur = sum * h;
        const double scale = std::max(std::fabs(cur), 1e-300);
        if (iter >= 1 && std::fabs(cur - prev) <= cfg.target_rel_tol * scale) {
            converged = true;
            out.rel_err_estimate = std::fabs(cur - prev) / scale;
            break;
        }
        out.rel_err_estimate = std::fabs(cur - prev) / scale;
        prev = cur;
        if (out.evaluations > cfg.max_evaluations) {
            break;
        }
    }
    out.converged = converged;
    out.step = h;
    out.half_width = T;
    const double integral = cur / M_PI;
    out.value = std::exp(M) * integral;
    out.log_abs = std::fabs(integral) > 0.0
                      ? M + std::log(std::fabs(integral))
                      : -std::numeric_limits<double>::infinity();
    return out;
}

// Expands T until the integrand has decayed decades below the peak, then
// runs the trapezoid refinement.
template <class LogIntegrand>
MeijerResult run_contour(const LogIntegrand& logL, double curvature,
                         const ContourConfig& cfg) {
    const double M = logL(0.0).real();
    const double width = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : 1.0;
    double T = cfg.half_width;
    if (T <= 0.0) {
        T = std::max(8.0, 6.0 * width);
        const double floor_log = std::log(std::max(cfg.target_rel_tol, 1e-15)) - 8.0;
        while (logL(T).real() - M > floor_log) {
            T *= 2.0;
            if (T > 1e7) {
                throw AccuracyError("mellin_barnes: contour truncation failed to decay", 0.0, 1.0);
            }
        }
    }
    const double h0 = cfg.initial_step > 0.0 ? cfg.initial_step
                                             : std::min(0.5, 0.5 * width);
    return contour_sum(logL, M, T, h0, cfg);
}

}  // namespace detail

// G^{q,0}_{0,q}(z | -; b).  Requires z >= 0.  At z = 0 the limit is finite
// exactly when the smallest b is zero, unique, and all other b positive; a
// negative or repeated smallest entry diverges.
inline MeijerResult meijer_g_q0(double z, const std::vector<double>& b,
                                const ContourConfig& cfg = {}) {
    if (b.empty()) {
        throw ConfigError("meijer_g_q0: empty parameter list");
    }
    if (!(z >= 0.0)) {
        throw DomainError("meijer_g_q0: requires z >= 0");
    }
    double b_min = b[0];
    for (double bj : b) b_min = std::min(b_min, bj);
    if (z == 0.0) {
        MeijerResult out;
        if (b_min > 0.0) {
            out.converged = true;
            return out;  // value 0, the z^{b_min} prefactor wins
        }
        int at_min = 0;
        double log_prod = 0.0;
        for (double bj : b) {
            if (bj == b_min) {
                ++at_min;
            } else {
                log_prod += log_gamma(bj);
            }
        }
        if (b_min < 0.0 || at_min > 1) {
            throw DivergenceError("meijer_g_q0: diverges at z = 0");
        }
        out.value = std::exp(log_prod);
        out.log_abs = log_prod;
        out.converged = true;
        return out;
    }
    const double lnz = std::log(z);
    double c;
    if (std::isnan(cfg.abscissa)) {
        // Saddle: sum_j psi(b_j - c) = ln z, capped at b_min - 1/4.
        const double hi = b_min - 0.25;
        auto fsad = [&](double cc) {
            double s = 0.0;
            for (double bj : b) s += digamma(bj - cc);
            return s - lnz;
        };
        if (fsad(hi) >= 0.0) {
            c = hi;
        } else {
            double lo = hi - 2.0;
            while (fsad(lo) < 0.0 && hi - lo < 1e7) {
                lo = hi - 2.0 * (hi - lo);
            }
            double a_ = lo, b_ = hi;
            for (int i = 0; i < 100; ++i) {
                const double mid = 0.5 * (a_ + b_);
                (fsad(mid) >= 0.0 ? a_ : b_) = mid;
            }
            c = 0.5 * (a_ + b_);
        }
    } else {
        if (cfg.abscissa >= b_min) {
            throw ConfigError("meijer_g_q0: abscissa must lie left of min(b)");
        }
        c = cfg.abscissa;
    }
    double curvature = 0.0;
    for (double bj : b) curvature += trigamma(bj - c);
    auto logL = [&, c](double t) {
        const std::complex<double> s(c, t);
        std::complex<double> L = s * lnz;
        for (double bj : b) L += log_gamma(bj - s);
        return L;
    };
    MeijerResult out = detail::run_contour(logL, curvature, cfg);
    out.abscissa = c;
    if (!out.converged) {
        throw AccuracyError("meijer_g_q0: refinement stalled at rel err " +
                                std::to_string(out.rel_err_estimate),
                            out.value, out.rel_err_estimate);
    }
    return out;
}

// G^{1,q}_{q,1}(z | a; 0).  Requires z >= 0 and all a_k < 1.  At z = 0 the
// value is prod_k Gamma(1 - a_k).
inline MeijerResult meijer_g_1q(double z, const std::vector<double>& a,
                                const ContourConfig& cfg = {}) {
    if (a.empty()) {
        throw ConfigError("meijer_g_1q: empty parameter list");
    }
    if (!(z >= 0.0)) {
        throw DomainError("meijer_g_1q: requires z >= 0");
    }
    double a_max = a[0];
    for (double ak : a) a_max = std::max(a_max, ak);
    if (!(a_max < 1.0)) {
        throw ConfigError("meijer_g_1q: requires a_k < 1");
    }
    if (z == 0.0) {
        MeijerResult out;
        double log_prod = 0.0;
        for (double ak : a) log_prod += log_gamma(1.0 - ak);
        out.value = std::exp(log_prod);
        out.log_abs = log_prod;
        out.converged = true;
        return out;
    }
    const double lnz = std::log(z);
    const double left = a_max - 1.0;  // first pole of the left ladder
    double c;
    if (std::isnan(cfg.abscissa)) {
        const double buf = std::min(0.25, -left / 4.0);
        const double lo0 = left + buf;
        const double hi0 = -buf;
        // Saddle: ln z - psi(-c) + sum_k psi(1 - a_k + c) = 0, increasing in c.
        auto fsad = [&](double cc) {
            double s = lnz - digamma(-cc);
            for (double ak : a) s += digamma(1.0 - ak + cc);
            return s;
        };
        if (fsad(hi0) <= 0.0) {
            c = hi0;
        } else if (fsad(lo0) >= 0.0) {
            c = lo0;
        } else {
            double a_ = lo0, b_ = hi0;
            for (int i = 0; i < 100; ++i) {
                const double mid = 0.5 * (a_ + b_);
                (fsad(mid) <= 0.0 ? a_ : b_) = mid;
            }
            c = 0.5 * (a_ + b_);
        }
    } else {
        if (!(cfg.abscissa > left && cfg.abscissa < 0.0)) {
            throw ConfigError("meijer_g_1q: abscissa must separate the pole ladders");
        }
        c = cfg.abscissa;
    }
    double curvature = trigamma(-c);
    for (double ak : a) curvature += trigamma(1.0 - ak + c);
    auto logL = [&, c](double t) {
        const std::complex<double> s(c, t);
        std::complex<double> L = s * lnz + log_gamma(-s);
        for (double ak : a) L += log_gamma(1.0 - ak + s);
        return L;
    };
    MeijerResult out = detail::run_contour(logL, curvature, cfg);
    out.abscissa = c;
    if (!out.converged) {
        throw AccuracyError("meijer_g_1q: refinement stalled at rel err " +
                                std::to_string(out.rel_err_estimate),
                            out.value, out.rel_err_estimate);
    }
    return out;
}

}  // namespace deepprior
