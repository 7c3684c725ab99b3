// Adaptive one-dimensional quadrature used throughout the library: a
// globally adaptive Gauss-Kronrod 7/15 rule (largest-error-first splitting)
// plus a square-root substitution helper for integrable endpoint
// singularities.  All routines are deterministic for fixed inputs.

#pragma once

#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "deepprior/errors.hpp"

namespace deepprior {

enum class CutoffPolicy {
    moment_bound,  // extend the domain until the integrand tail is negligible
    fixed_radius,  // integrate over the caller-supplied radius only
};

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_subdivisions = 800;
    CutoffPolicy cutoff = CutoffPolicy::moment_bound;
    double fixed_radius = 0.0;  // used when cutoff == fixed_radius
};

struct QuadratureResult {
    double value = 0.0;
    double err_estimate = 0.0;
    int segments = 0;
    bool converged = false;
};

namespace detail {

// QUADPACK dqk15 nodes and weights on [-1, 1].
inline constexpr double kGk15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
};
inline constexpr double kGk15Weights[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
};
inline constexpr double kG7Weights[4] = {
    0.1294849661688697, 0.2797053914892767,
    0.3818300505051189, 0.4179591836734694,
};

struct GkSegment {
    double a, b, value, error;
    bool operator<(const GkSegment& o) const { return error < o.error; }
};

template <class F>
GkSegment gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = kGk15Weights[7] * f(c);
    double gauss = kG7Weights[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGk15Nodes[i];
        const double fs = f(c - dx) + f(c + dx);
        kron += kGk15Weights[i] * fs;
        if (i % 2 == 1) {
            gauss += kG7Weights[i / 2] * fs;
        }
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::fabs(kron - gauss)};
}

}  // namespace detail

// Globally adaptive integral of f over [a, b].
template <class F>
QuadratureResult integrate(const F& f, double a, double b, const QuadratureConfig& cfg = {}) {
    if (!(b >= a)) {
        throw DomainError("integrate: requires b >= a");
    }
    QuadratureResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<detail::GkSegment> queue;
    detail::GkSegment whole = detail::gk15(f, a, b);
    double total = whole.value;
    double err = whole.error;
    queue.push(whole);
    int splits = 0;
    while (splits < cfg.max_subdivisions) {
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
        if (err <= tol) {
            break;
        }
        detail::GkSegment seg = queue.top();
        queue.pop();
        const double mid = 0.5 * (seg.a + seg.b);
        if (mid <= seg.a || mid >= seg.b) {
            // Interval collapsed to machine precision; keep its estimate.
            err -= seg.error;
            queue.push({seg.a, seg.b, seg.value, 0.0});
            continue;
        }
        detail::GkSegment left = detail::gk15(f, seg.a, mid);
        detail::GkSegment right = detail::gk15(f, mid, seg.b);
        total += left.value + right.value - seg.value;
        err += left.error + right.error - seg.error;
        queue.push(left);
        queue.push(right);
        ++splits;
    }
    res.value = total;
    res.err_estimate = err;
    res.segments = splits + 1;
    res.converged = err <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
    return res;
}

// Integral of f over [a, b] where f may carry an integrable singularity at
// the left endpoint (r^{-alpha} with alpha < 1, or a logarithm).  Uses
// r = a + u^2, which regularizes both.
template <class F>
QuadratureResult integrate_left_singular(const F& f, double a, double b,
                                         const QuadratureConfig& cfg = {}) {
    const double w = std::sqrt(b - a);
    return integrate([&](double u) { return 2.0 * u * f(a + u * u); }, 0.0, w, cfg);
}

// Semi-infinite integral of a decaying radial integrand: integrates over
// [a, R] and doubles R until the last octave contributes less than the
// tolerance share.  The moment_bound policy grows R adaptively; fixed_radius
// integrates once over the configured radius.
template <class F>
QuadratureResult integrate_tail(const F& f, double a, double r0, const QuadratureConfig& cfg = {}) {
    if (cfg.cutoff == CutoffPolicy::fixed_radius) {
        return integrate(f, a, cfg.fixed_radius, cfg);
    }
    double right = std::max(r0, a + 1.0);
    QuadratureResult acc = integrate(f, a, right, cfg);
    for (int round = 0; round < 60; ++round) {
        const double next = right * 2.0;
        QuadratureResult piece = integrate(f, right, next, cfg);
        acc.value += piece.value;
        acc.err_estimate += piece.err_estimate;
        acc.segments += piece.segments;
        right = next;
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(acc.value));
        if (std::fabs(piece.value) + piece.err_estimate <= tol) {
            acc.converged = true;
            return acc;
        }
    }
    acc.converged = false;
    return acc;
}

}  // namespace deepprior
