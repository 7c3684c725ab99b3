// Tail heaviness through the moment growth rate.  The prior of a depth-d
// network has log-Weibull-type tails with exponent 2/d: equivalently the
// root moment curve m -> (E ||h||^m)^{1/m} grows like m^{d/2}, so the
// log-log slope of that curve estimates theta = d/2 regardless of widths
// or activation.  Narrow hidden layers reach the asymptotic slope fastest;
// wide ones need very high orders before the tail regime kicks in.

#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"
#include "deepprior/linear_prior.hpp"
#include "deepprior/network_spec.hpp"
#include "deepprior/relu_prior.hpp"

namespace deepprior {

// Points (m, (E ||h||^m)^{1/m}), computed in log space so high orders
// cannot overflow.
inline std::vector<std::pair<double, double>> root_moment_curve(
    const NetworkSpec& spec, const std::vector<double>& orders) {
    spec.validate();
    std::vector<std::pair<double, double>> out;
    out.reserve(orders.size());
    for (double m : orders) {
        if (!(m > 0.0)) {
            throw ConfigError("root_moment_curve: orders must be positive");
        }
        const double lm = spec.activation == Activation::relu
                              ? log_moment_norm_relu(spec, m)
                              : log_moment_norm_linear(spec, m);
        out.emplace_back(m, std::exp(lm / m));
    }
    return out;
}

struct TailEstimate {
    double theta_hat = 0.0;   // fitted log-log slope; d/2 in the tail regime
    double intercept = 0.0;
    int orders_used = 0;
};

// Least-squares slope of ln(root moment) against ln(m) over the top half
// of the supplied orders (the low orders probe the bulk, not the tail).
inline TailEstimate estimate_tail_parameter(
    const std::vector<std::pair<double, double>>& curve) {
    double m_max = 0.0;
    for (const auto& [m, rm] : curve) m_max = std::max(m_max, m);
    std::vector<std::pair<double, double>> pts;
    for (const auto& [m, rm] : curve) {
        if (m >= 0.5 * m_max) {
            pts.emplace_back(std::log(m), std::log(rm));
        }
    }
    if (pts.size() < 5) {
        throw ConfigError("estimate_tail_parameter: need at least 5 orders in the top half");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    TailEstimate est;
    est.theta_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    est.intercept = (sy - est.theta_hat * sx) / n;
    est.orders_used = static_cast<int>(pts.size());
    return est;
}

// Per-layer ReLU moment factor B(n, m) = 2^{-n} sum_k C(n,k)
// Gamma((k+m)/2) / Gamma(k/2), in log form.
inline double relu_layer_log_factor(int n, double m) {
    if (n < 1) {
        throw ConfigError("relu_layer_log_factor: width must be >= 1");
    }
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(n);
    for (int k = 1; k <= n; ++k) {
        const double t =
            log_binomial(n, k) + log_gamma(0.5 * (k + m)) - log_gamma(0.5 * k);
        terms.push_back(t);
        mx = std::max(mx, t);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - mx);
    return mx + std::log(acc) - n * std::log(2.0);
}

struct LayerBoundCheck {
    int width = 0;
    double order = 0.0;
    double lower = 0.0;  // m-th roots, so all three scale like the moment
    double value = 0.0;
    double upper = 0.0;
    bool pass = false;
};

// The ReLU factor is bracketed by the half-Gaussian below and the full
// chi moment above:
//   (1/2) (Gamma((1+m)/2)/Gamma(1/2))^{1/m}
//     <= B(n, m)^{1/m} <= (Gamma((n+m)/2)/Gamma(n/2))^{1/m},
// which pins the tail exponent between the two chi regimes.
inline std::vector<LayerBoundCheck> relu_moment_bounds_check(
    const NetworkSpec& spec, const std::vector<double>& orders) {
    spec.validate();
    std::vector<LayerBoundCheck> out;
    for (int l = 0; l + 1 < spec.depth(); ++l) {
        const int n = spec.widths[l];
        for (double m : orders) {
            LayerBoundCheck chk;
            chk.width = n;
            chk.order = m;
            chk.lower = std::exp(
                (-std::log(2.0) * m + log_gamma(0.5 * (1.0 + m)) - log_gamma(0.5)) / m);
            chk.value = std::exp(relu_layer_log_factor(n, m) / m);
            chk.upper = std::exp(
                (log_gamma(0.5 * (n + m)) - log_gamma(0.5 * n)) / m);
            chk.pass = chk.lower <= chk.value * (1.0 + 1e-12) &&
                       chk.value <= chk.upper * (1.0 + 1e-12);
            out.push_back(chk);
        }
    }
    return out;
}

}  // namespace deepprior
