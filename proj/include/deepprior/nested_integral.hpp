// Independent oracle for the density-family Meijer G values: the nested
// integral
//
//   f_q(z; nu_1..nu_q) = [prod_j int_0^inf dt_j t_j^{nu_j - 1} e^{-t_j}]
//                        exp(-z / (t_1 ... t_q))
//
// evaluated through the recursion f_j(z) = int t^{nu_j - 1} e^{-t}
// f_{j-1}(z / t) dt with f_0 = exp(-z).  Everything is done on the real
// axis in log space: each level integrates exp(nu u - e^u + log f_{j-1})
// over u = ln t by trapezoid refinement (the integrand decays doubly
// exponentially at both ends after the substitution, including for
// nu <= 0, where the inner factor rescues the t -> 0 endpoint).  Inner
// levels are memoized on a geometric grid in their argument with cubic
// interpolation of the log value, which caps the nested cost at one grid
// build per level.  This path shares no code with the Mellin-Barnes
// contour evaluator it cross-checks.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"
#include "deepprior/quadrature.hpp"

namespace deepprior {

struct FqValue {
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
};

namespace detail {

inline constexpr double kFqNodeSpacing = 0.010830424696159095;  // ln(2)/64

// One level of the recursion: log f_j as a function of x = ln z, cached on
// the geometric grid x_k = k * spacing with 4-point interpolation.
class FqLevel {
public:
    FqLevel(double nu, std::function<double(double)> inner_log)
        : nu_(nu), inner_log_(std::move(inner_log)) {}

    // Exact (non-interpolated) evaluation at x = ln z.
    double exact_log(double x) const {
        auto g = [&](double u) {
            const double eu = u < 700.0 ? std::exp(u) : std::numeric_limits<double>::infinity();
            return nu_ * u - eu + inner_log_(x - u);
        };
        // Window margin below the peak: 46 keeps integrand down to 1e-20,
        // but for astronomically large |log| it must stay above the ULP or
        // peak - margin == peak and the comparisons degenerate.
        auto margin = [](double p) { return std::max(46.0, std::fabs(p) * 0x1p-45); };
        // Coarse scan for the peak, expanded until both ends are decades
        // below it.
        double step = 0.5;
        std::vector<double> us, gs;
        for (double u = -30.0; u < 10.0; u += step) {
            us.push_back(u);
            gs.push_back(g(u));
        }
        auto imax = [&] {
            std::size_t im = 0;
            for (std::size_t i = 1; i < gs.size(); ++i) {
                if (gs[i] > gs[im]) im = i;
            }
            return im;
        };
        double peak = gs[imax()];
        while (gs.front() > peak - margin(peak) && us.front() > -700.0) {
            us.insert(us.begin(), us.front() - step);
            gs.insert(gs.begin(), g(us.front()));
            peak = std::max(peak, gs.front());
        }
        while (gs.back() > peak - margin(peak) && us.back() < 700.0) {
            us.push_back(us.back() + step);
            gs.push_back(g(us.back()));
            peak = std::max(peak, gs.back());
        }
        // Trim to the window within the margin of the peak (one step of
        // padding), then refine the scan until the peak is resolved: far
        // in the tails |log f| is astronomical and the peak a needle much
        // narrower than any fixed step.
        double ua = us.front(), ub = us.back();
        for (int refine = 0; refine < 60; ++refine) {
            const std::size_t ip = imax();
            peak = gs[ip];
            const double cut = peak - margin(peak);
            std::size_t lo = 0;
            while (lo < ip && gs[lo] < cut) ++lo;
            std::size_t hi = gs.size() - 1;
            while (hi > ip && gs[hi] < cut) --hi;
            ua = us[lo > 0 ? lo - 1 : 0];
            ub = us[hi + 1 < us.size() ? hi + 1 : hi];
            if (hi - lo >= 24 || step <= 0x1p-24) break;
            step = std::max((ub - ua) / 48.0, step / 64.0);
            us.clear();
            gs.clear();
            for (double u = ua; u <= ub + 0.5 * step; u += step) {
                us.push_back(u);
                gs.push_back(g(u));
            }
        }
        // Trapezoid with halving; each estimate is its own log-sum-exp, so a
        // peak missed by the scan cannot overflow.
        auto estimate = [&](double h) {
            const std::size_t n = static_cast<std::size_t>(std::ceil((ub - ua) / h));
            std::vector<double> vals(n + 1);
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k <= n; ++k) {
                vals[k] = g(ua + k * h);
                m = std::max(m, vals[k]);
            }
            double s = 0.0;
            for (std::size_t k = 0; k <= n; ++k) {
                const double d = vals[k] - m;
                if (d > -746.0) s += std::exp(d);
            }
            return m + std::log(s * h);
        };
        double h = step * 0.5;
        double prev = estimate(h);
        double cur = prev;
        for (int iter = 0; iter < 14; ++iter) {
            h *= 0.5;
            cur = estimate(h);
            // Absolute tolerance on the log is a relative tolerance on the
            // value; large |log| values cannot beat their own rounding.
            if (std::fabs(cur - prev) <= std::max(1e-12, 1e-14 * std::fabs(cur))) {
                return cur;
            }
            prev = cur;
        }
        return cur;
    }

    // Interpolated evaluation used by the level above.
    double log_at(double x) const {
        const double xx = x / kFqNodeSpacing;
        const long k = static_cast<long>(std::floor(xx));
        const double y0 = node(k - 1), y1 = node(k), y2 = node(k + 1), y3 = node(k + 2);
        if (!std::isfinite(y0) || !std::isfinite(y1) || !std::isfinite(y2) ||
            !std::isfinite(y3)) {
            return std::min(std::min(y0, y1), std::min(y2, y3));
        }
        const double t = xx - static_cast<double>(k);
        return -t * (t - 1.0) * (t - 2.0) / 6.0 * y0 +
               (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0 * y1 -
               (t + 1.0) * t * (t - 2.0) / 2.0 * y2 +
               (t + 1.0) * t * (t - 1.0) / 6.0 * y3;
    }

private:
    double node(long k) const {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(k);
            if (it != cache_.end()) return it->second;
        }
        const double v = exact_log(k * kFqNodeSpacing);
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.emplace(k, v).first->second;
    }

    double nu_;
    std::function<double(double)> inner_log_;
    mutable std::mutex mutex_;
    mutable std::map<long, double> cache_;
};

}  // namespace detail

// Reusable evaluator for f_q at fixed shifts; grids built lazily, so
// evaluating a whole radius grid costs one cache per level.
class FqEvaluator {
public:
    explicit FqEvaluator(std::vector<double> nus) : nus_(std::move(nus)) {
        std::function<double(double)> inner = [](double x) {
            return x < 700.0 ? -std::exp(x) : -std::numeric_limits<double>::infinity();
        };
        for (std::size_t j = 0; j + 1 < nus_.size(); ++j) {
            auto level = std::make_shared<detail::FqLevel>(nus_[j], inner);
            levels_.push_back(level);
            inner = [level](double x) { return level->log_at(x); };
        }
        if (!nus_.empty()) {
            outer_ = std::make_unique<detail::FqLevel>(nus_.back(), inner);
        }
        inner_log_ = inner;
    }

    double log_value(double z) const {
        if (!(z >= 0.0)) {
            throw DomainError("f_q: requires z >= 0");
        }
        if (z == 0.0) {
            // Integrals decouple into Gamma factors; diverges unless all
            // shifts are positive.
            double s = 0.0;
            for (double nu : nus_) {
                if (nu <= 0.0) {
                    throw DivergenceError("f_q: diverges at z = 0 for nu <= 0");
                }
                s += log_gamma(nu);
            }
            return s;
        }
        if (nus_.empty()) {
            return -z;
        }
        return outer_->exact_log(std::log(z));
    }

    FqValue operator()(double z) const {
        FqValue out;
        out.log_value = log_value(z);
        out.value = std::exp(out.log_value);
        return out;
    }

private:
    std::vector<double> nus_;
    std::vector<std::shared_ptr<detail::FqLevel>> levels_;
    std::unique_ptr<detail::FqLevel> outer_;
    std::function<double(double)> inner_log_;
};

// One-shot convenience wrapper.
inline FqValue f_q_nested(double z, const std::vector<double>& nus) {
    return FqEvaluator(nus)(z);
}

}  // namespace deepprior
