// Exact single-input prior of a deep linear network h = W_d ... W_1 x with
// independent N(0, sigma_l^2) weights.  The output law is radial; with
// kappa = prod(sigma_l) ||x||, nu_l = (n_l - n_d)/2 and gamma_d =
// prod_{l<d} Gamma(n_l/2)^{-1}:
//
//   p_d(r)   = gamma_d (2^d pi kappa^2)^{-n_d/2} G[d,0]( r^2 / (2^d kappa^2) )
//   phi_d(q) = gamma_d G[1,d-1]( 2^{d-2} kappa^2 q^2 )
//
// where G[d,0] carries parameters (0, nu_1..nu_{d-1}) and G[1,d-1] carries
// (1 - n_1/2, .., 1 - n_{d-1}/2; 0).  Depths 1 and 2 reduce to Gaussian and
// Bessel-K closed forms and are dispatched to them; the Bessel route also
// serves as an independent check on the contour evaluator.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "deepprior/bessel.hpp"
#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"
#include "deepprior/mellin_barnes.hpp"
#include "deepprior/network_spec.hpp"

namespace deepprior {

inline constexpr double kPi = 3.14159265358979323846;

struct DensityValue {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
    bool divergent = false;  // density unbounded at this radius (only r = 0)
    double rel_err_estimate = 0.0;
};

struct CharfunValue {
    double value = 0.0;
    double rel_err_estimate = 0.0;
};

namespace detail {

inline void require_linear_usable(const NetworkSpec& spec) {
    spec.validate();
}

inline DensityValue divergent_density() {
    DensityValue out;
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
    out.log_value = std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace detail

// Depth-2 closed form:
//   p(r) = (4 pi kappa^2)^{-n_2/2} (2 / Gamma(n_1/2)) (r / 2 kappa)^{nu}
//          K_nu(r / kappa),   nu = (n_1 - n_2) / 2.
inline DensityValue density_two_layer(const NetworkSpec& spec, double r) {
    detail::require_linear_usable(spec);
    if (spec.depth() != 2) {
        throw ConfigError("density_two_layer: depth must be 2");
    }
    if (!(r >= 0.0)) {
        throw DomainError("density_two_layer: radius must be >= 0");
    }
    const auto c = prior_constants(spec);
    const double n1 = spec.widths[0];
    const double n2 = spec.widths[1];
    const double nu = 0.5 * (n1 - n2);
    const double log_pref =
        -0.5 * n2 * (std::log(4.0 * kPi) + 2.0 * c.log_kappa) + std::log(2.0) -
        log_gamma(0.5 * n1);
    DensityValue out;
    if (r == 0.0) {
        if (nu <= 0.0) return detail::divergent_density();
        // (r/2k)^nu K_nu(r/k) -> Gamma(nu)/2 as r -> 0.
        out.log_value = log_pref + log_gamma(nu) - std::log(2.0);
        out.value = std::exp(out.log_value);
        out.rel_err_estimate = 1e-14;
        return out;
    }
    const auto k = bessel_k(nu, r * std::exp(-c.log_kappa));
    out.log_value = log_pref + nu * (std::log(r) - std::log(2.0) - c.log_kappa) +
                    k.log_value;
    out.value = std::exp(out.log_value);
    out.rel_err_estimate = 1e-13;
    return out;
}

// General contour route for any depth >= 2; used directly by tests that
// pit it against the depth-2 closed form, and by density_linear for
// depth >= 3.
inline DensityValue density_linear_meijer(const NetworkSpec& spec, double r,
                                          const ContourConfig& cfg = {}) {
    detail::require_linear_usable(spec);
    if (spec.depth() < 2) {
        throw ConfigError("density_linear_meijer: depth must be >= 2");
    }
    if (!(r >= 0.0)) {
        throw DomainError("density_linear_meijer: radius must be >= 0");
    }
    const auto c = prior_constants(spec);
    const int d = spec.depth();
    const double nd = spec.out_width();

    std::vector<double> b;
    b.reserve(d);
    b.push_back(0.0);
    int min_hidden = spec.widths[0];
    for (int l = 0; l + 1 < d; ++l) {
        b.push_back(0.5 * (spec.widths[l] - nd));
        min_hidden = std::min(min_hidden, spec.widths[l]);
    }
    const double log_pref =
        c.log_gamma_norm -
        0.5 * nd * (d * std::log(2.0) + std::log(kPi) + 2.0 * c.log_kappa);

    DensityValue out;
    if (r == 0.0) {
        if (min_hidden <= nd) return detail::divergent_density();
        double lg = 0.0;
        for (std::size_t j = 1; j < b.size(); ++j) lg += log_gamma(b[j]);
        out.log_value = log_pref + lg;
        out.value = std::exp(out.log_value);
        out.rel_err_estimate = 1e-14;
        return out;
    }
    const double log_z = 2.0 * std::log(r) - d * std::log(2.0) - 2.0 * c.log_kappa;
    const auto g = meijer_g_q0(std::exp(log_z), b, cfg);
    out.log_value = log_pref + g.log_abs;
    out.value = std::exp(out.log_value);
    out.rel_err_estimate = g.rel_err_estimate;
    return out;
}

// Exact radial density of the output vector evaluated at any point of norm
// r (not the density of the norm itself; multiply by the sphere area to
// get that).  Depths 1 and 2 take the closed forms.
inline DensityValue density_linear(const NetworkSpec& spec, double r,
                                   const ContourConfig& cfg = {}) {
    detail::require_linear_usable(spec);
    const int d = spec.depth();
    if (d == 1) {
        if (!(r >= 0.0)) {
            throw DomainError("density_linear: radius must be >= 0");
        }
        const auto c = prior_constants(spec);
        const double nd = spec.out_width();
        DensityValue out;
        out.log_value = -0.5 * nd * (std::log(2.0 * kPi) + 2.0 * c.log_kappa) -
                        0.5 * r * r * std::exp(-2.0 * c.log_kappa);
        out.value = std::exp(out.log_value);
        out.rel_err_estimate = 1e-16;
        return out;
    }
    if (d == 2) {
        return density_two_layer(spec, r);
    }
    return density_linear_meijer(spec, r, cfg);
}

// Contour route for the characteristic function at any depth >= 2.
inline CharfunValue charfun_linear_meijer(const NetworkSpec& spec, double q,
                                          const ContourConfig& cfg = {}) {
    detail::require_linear_usable(spec);
    if (spec.depth() < 2) {
        throw ConfigError("charfun_linear_meijer: depth must be >= 2");
    }
    if (!(q >= 0.0)) {
        throw DomainError("charfun_linear_meijer: frequency must be >= 0");
    }
    CharfunValue out;
    if (q == 0.0) {
        out.value = 1.0;
        return out;
    }
    const auto c = prior_constants(spec);
    const int d = spec.depth();
    std::vector<double> a;
    a.reserve(d - 1);
    for (int l = 0; l + 1 < d; ++l) {
        a.push_back(1.0 - 0.5 * spec.widths[l]);
    }
    const double kq2 = std::exp(2.0 * (c.log_kappa + std::log(q)));
    const double z = std::ldexp(kq2, d - 2);
    const auto g = meijer_g_1q(z, a, cfg);
    out.value = std::exp(c.log_gamma_norm) * g.value;
    out.rel_err_estimate = g.rel_err_estimate;
    return out;
}

// Characteristic function phi(q) = E exp(i <t, h>) for any |t| = q; real
// by symmetry.  Depths 1 and 2 take the closed forms.
inline CharfunValue charfun_linear(const NetworkSpec& spec, double q,
                                   const ContourConfig& cfg = {}) {
    detail::require_linear_usable(spec);
    if (!(q >= 0.0)) {
        throw DomainError("charfun_linear: frequency must be >= 0");
    }
    const auto c = prior_constants(spec);
    const int d = spec.depth();
    CharfunValue out;
    if (q == 0.0) {
        out.value = 1.0;
        return out;
    }
    const double kq2 = std::exp(2.0 * (c.log_kappa + std::log(q)));
    if (d == 1) {
        out.value = std::exp(-0.5 * kq2);
        out.rel_err_estimate = 1e-16;
        return out;
    }
    if (d == 2) {
        // (1 + kappa^2 q^2)^{-n_1/2}
        out.value = std::exp(-0.5 * spec.widths[0] * std::log1p(kq2));
        out.rel_err_estimate = 1e-15;
        return out;
    }
    return charfun_linear_meijer(spec, q, cfg);
}

// log E ||h||^m = (d m / 2) ln 2 + m ln kappa
//               + sum_l [ lnGamma((n_l + m)/2) - lnGamma(n_l/2) ].
inline double log_moment_norm_linear(const NetworkSpec& spec, double m) {
    detail::require_linear_usable(spec);
    int min_width = spec.widths[0];
    for (int n : spec.widths) min_width = std::min(min_width, n);
    if (!(m > -static_cast<double>(min_width))) {
        throw DomainError("log_moment_norm_linear: moment order must exceed -min(width)");
    }
    const auto c = prior_constants(spec);
    double s = 0.5 * spec.depth() * m * std::log(2.0) + m * c.log_kappa;
    for (int n : spec.widths) {
        s += log_gamma(0.5 * (n + m)) - log_gamma(0.5 * n);
    }
    return s;
}

namespace detail {

// Shared by the linear and ReLU second-moment closed forms so their ratio
// is formed from the same product, making it exact in floating point.
inline double second_moment_width_product(const NetworkSpec& spec) {
    const auto c = prior_constants(spec);
    double v = c.kappa * c.kappa;
    for (int n : spec.widths) {
        v *= static_cast<double>(n);
    }
    return v;
}

}  // namespace detail

inline double moment_norm_linear(const NetworkSpec& spec, double m) {
    if (m == 0.0) return 1.0;
    if (m == 2.0) {
        // E ||h||^2 = kappa^2 prod_l n_l.
        detail::require_linear_usable(spec);
        return detail::second_moment_width_product(spec);
    }
    return std::exp(log_moment_norm_linear(spec, m));
}

// Density of a single output component (the 1-d marginal), which equals
// the radial density of the same stack with output width 1.
inline DensityValue marginal_density_1d(const NetworkSpec& spec, double h,
                                        const ContourConfig& cfg = {}) {
    detail::require_linear_usable(spec);
    std::vector<int> w = spec.widths;
    w.back() = 1;
    return density_linear(spec.with_widths(w), std::fabs(h), cfg);
}

}  // namespace deepprior
