// Radial Fourier transforms in n dimensions, reduced to Hankel integrals.
// For a radial density p(r) the characteristic function is radial too and
// the pair is
//
//   phi(q) = (2 pi)^{n/2} q^{(2-n)/2} int_0^inf r^{n/2} J_{(n-2)/2}(q r) p(r) dr
//   p(r)   = (2 pi)^{-n/2} r^{(2-n)/2} int_0^inf q^{n/2} J_{(n-2)/2}(r q) phi(q) dq
//
// The oscillatory integral is split at the Bessel zeros; each sign-coherent
// segment gets Gauss-Kronrod, and the partial-sum sequence is accelerated
// by iterated averaging, which handles the slowly decaying tails that show
// up when the transform target has heavy tails or a cusp.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "deepprior/bessel.hpp"
#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"
#include "deepprior/quadrature.hpp"

namespace deepprior {

enum class HankelDirection {
    forward,   // density -> characteristic function
    inverse,   // characteristic function -> density
};

struct HankelConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    // Partial sums kept for the averaging window.
    int window = 16;
    int max_segments = 2000;
    // Segment integrals use a small adaptive budget each.
    int per_segment_subdivisions = 24;
};

namespace detail {

// Iterated averaging (repeated pairwise means) of a partial-sum window.
inline double average_window(std::vector<double> v) {
    while (v.size() > 1) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            v[i] = 0.5 * (v[i] + v[i + 1]);
        }
        v.pop_back();
    }
    return v.front();
}

}  // namespace detail

// Transform of a radial profile at a single point rho >= 0.  `fn` is the
// input profile (p for forward, phi for inverse) and must be finite on
// (0, inf); an integrable singularity at 0 is handled by the substitution
// in the first segment.
inline double hankel_radial_point(const std::function<double(double)>& fn,
                                  int dim, HankelDirection direction,
                                  double rho, const HankelConfig& cfg = {}) {
    if (dim < 1) {
        throw ConfigError("hankel_radial_point: dimension must be >= 1");
    }
    if (!(rho >= 0.0)) {
        throw DomainError("hankel_radial_point: rho must be >= 0");
    }
    const double n = static_cast<double>(dim);
    const double log_2pi = std::log(2.0 * 3.14159265358979323846);
    const double sign = direction == HankelDirection::forward ? 1.0 : -1.0;

    QuadratureConfig qcfg;
    qcfg.rel_tol = cfg.rel_tol * 0.1;
    qcfg.abs_tol = cfg.abs_tol;

    if (rho == 0.0) {
        // J_nu(0) reduces the kernel to the surface-area moment:
        //   out(0) = C * S_{n-1} int u^{n-1} fn(u) du,
        // with C = 1 forward and (2 pi)^{-n} inverse.
        auto g = [&](double u) { return std::pow(u, n - 1.0) * fn(u); };
        QuadratureConfig head = qcfg;
        head.max_subdivisions = 200;
        const auto inner = integrate_left_singular(g, 0.0, 1.0, head);
        const auto tail = integrate_tail(g, 1.0, 2.0, qcfg);
        const double surface = 2.0 * std::exp(0.5 * n * std::log(3.14159265358979323846) -
                                              log_gamma(0.5 * n));
        const double c = direction == HankelDirection::forward
                             ? 1.0
                             : std::exp(-n * log_2pi);
        return c * surface * (inner.value + tail.value);
    }

    const double nu = 0.5 * n - 1.0;
    auto kernel = [&](double u) {
        return std::pow(u, 0.5 * n) * bessel_j(nu, rho * u) * fn(u);
    };

    // First segment, up to the first positive Bessel zero (or 1/rho for
    // n = 1 where cos has its zero at pi/2rho; bessel_j_zero handles the
    // half-integer order directly).
    double z_prev = bessel_j_zero(nu, 1) / rho;
    QuadratureConfig first = qcfg;
    first.max_subdivisions = 200;
    double total = integrate_left_singular(kernel, 0.0, z_prev, first).value;

    std::vector<double> partials;
    partials.reserve(cfg.window);
    double last_accel = std::numeric_limits<double>::quiet_NaN();
    QuadratureConfig seg_cfg = qcfg;
    seg_cfg.max_subdivisions = cfg.per_segment_subdivisions;

    int tiny_run = 0;
    for (int k = 2; k <= cfg.max_segments + 1; ++k) {
        const double z_next = bessel_j_zero(nu, k) / rho;
        const double piece = integrate(kernel, z_prev, z_next, seg_cfg).value;
        total += piece;
        z_prev = z_next;

        partials.push_back(total);
        if (static_cast<int>(partials.size()) > cfg.window) {
            partials.erase(partials.begin());
        }

        const double scale = std::max(std::fabs(total), cfg.abs_tol);
        if (std::fabs(piece) <= cfg.rel_tol * scale * 1e-2 + cfg.abs_tol) {
            if (++tiny_run >= 2) break;  // integrand already decayed
        } else {
            tiny_run = 0;
        }

        if (static_cast<int>(partials.size()) == cfg.window && k % 8 == 0) {
            const double accel = detail::average_window(partials);
            if (std::isfinite(last_accel) &&
                std::fabs(accel - last_accel) <=
                    cfg.rel_tol * std::max(std::fabs(accel), cfg.abs_tol)) {
                total = accel;
                tiny_run = 2;
                break;
            }
            last_accel = accel;
        }
    }
    if (tiny_run < 2) {
        // Ran out of segments: report the accelerated value with its
        // last observed movement as the error.
        const double accel = partials.empty() ? total : detail::average_window(partials);
        const double err = std::isfinite(last_accel)
                               ? std::fabs(accel - last_accel)
                               : std::fabs(accel) * 0.1;
        if (err > cfg.rel_tol * std::max(std::fabs(accel), 1e-300) * 100.0) {
            throw AccuracyError("hankel_radial_point: partial sums did not settle", accel,
                                err / std::max(std::fabs(accel), 1e-300));
        }
        total = accel;
    }

    const double pre = std::exp(sign * 0.5 * n * log_2pi) *
                       std::pow(rho, 0.5 * (2.0 - n));
    return pre * total;
}

// Grid helper; evaluates the transform independently at each point.
inline std::vector<double> hankel_radial(const std::function<double(double)>& fn,
                                         int dim, HankelDirection direction,
                                         const std::vector<double>& grid,
                                         const HankelConfig& cfg = {}) {
    std::vector<double> out;
    out.reserve(grid.size());
    for (double rho : grid) {
        out.push_back(hankel_radial_point(fn, dim, direction, rho, cfg));
    }
    return out;
}

}  // namespace deepprior
