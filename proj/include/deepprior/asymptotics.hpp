// Wide-width asymptotics at fixed depth.  With the scale held through
// varkappa = kappa * sqrt(prod hidden widths), the prior converges to a
// Gaussian as the hidden widths grow, and the leading finite-width
// correction is an Edgeworth-type factor controlled by S = sum_l 1/n_l:
//
//   p(r) ~ N(0, v I)(r) * [1 + c S (u^2 - 2(n_d + 2) u + n_d (n_d + 2))],
//   u = r^2 / v,   v = varkappa^2 (linear),  v = 2^{1-d} varkappa^2 (ReLU),
//   c = 1/4 (linear), 5/4 (ReLU).
//
// The bracket can dip negative far in the tail; that is a property of the
// expansion and is reported, not clipped.

#pragma once

#include <cmath>
#include <vector>

#include "deepprior/errors.hpp"
#include "deepprior/linear_prior.hpp"
#include "deepprior/network_spec.hpp"

namespace deepprior {

// A spec plus the width-robust scale varkappa; keeping varkappa fixed while
// widths grow is the regime where the Gaussian limit holds.
struct WidthScaledSpec {
    NetworkSpec spec;
    double varkappa = 1.0;

    static WidthScaledSpec from_spec(const NetworkSpec& s) {
        WidthScaledSpec out;
        out.spec = s;
        const auto c = prior_constants(s);
        double lp = 0.0;
        for (int l = 0; l + 1 < s.depth(); ++l) {
            lp += std::log(static_cast<double>(s.widths[l]));
        }
        out.varkappa = std::exp(c.log_kappa + 0.5 * lp);
        return out;
    }
};

// Variance per component of the limiting Gaussian.
inline double limit_variance(const WidthScaledSpec& ws) {
    const double v = ws.varkappa * ws.varkappa;
    return ws.spec.activation == Activation::relu
               ? std::ldexp(v, 1 - ws.spec.depth())
               : v;
}

// The Gaussian the prior converges to: N(0, v I_{n_d}) evaluated at
// radius r.
inline double gaussian_limit_density(const WidthScaledSpec& ws, double r) {
    ws.spec.validate();
    const double v = limit_variance(ws);
    const double nd = ws.spec.out_width();
    return std::exp(-0.5 * nd * std::log(2.0 * kPi * v) - 0.5 * r * r / v);
}

// Fourth cumulant of one output component of the linear network:
//   chi_4 = 3 varkappa^4 (prod_l (n_l + 2)/n_l - 1)    (hidden product),
// which vanishes at rate sum 1/n_l, fixing the Edgeworth coefficient.
inline double fourth_cumulant_linear(const WidthScaledSpec& ws) {
    ws.spec.validate();
    double prod = 1.0;
    for (int l = 0; l + 1 < ws.spec.depth(); ++l) {
        prod *= (ws.spec.widths[l] + 2.0) / ws.spec.widths[l];
    }
    const double v2 = ws.varkappa * ws.varkappa;
    return 3.0 * v2 * v2 * (prod - 1.0);
}

struct EdgeworthValue {
    double value = 0.0;
    bool negative = false;  // correction bracket dipped below zero here
};

inline EdgeworthValue edgeworth_density(const WidthScaledSpec& ws, double r) {
    ws.spec.validate();
    if (!(r >= 0.0)) {
        throw DomainError("edgeworth_density: radius must be >= 0");
    }
    const double v = limit_variance(ws);
    const double nd = ws.spec.out_width();
    const double c = ws.spec.activation == Activation::relu ? 1.25 : 0.25;
    double s_inv = 0.0;
    for (int l = 0; l + 1 < ws.spec.depth(); ++l) {
        s_inv += 1.0 / ws.spec.widths[l];
    }
    const double u = r * r / v;
    const double bracket =
        1.0 + c * s_inv * (u * u - 2.0 * (nd + 2.0) * u + nd * (nd + 2.0));
    EdgeworthValue out;
    out.negative = bracket < 0.0;
    out.value = std::exp(-0.5 * nd * std::log(2.0 * kPi * v) - 0.5 * u) * bracket;
    return out;
}

}  // namespace deepprior
