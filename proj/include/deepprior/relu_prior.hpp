// Exact single-input prior of a deep ReLU network.  For a single input,
// conditioning on the sign pattern of each hidden layer makes the network
// linear with the active sub-widths, and signs are iid fair coins, so the
// output law is a finite mixture:
//
//   p^relu = atom * delta_0
//          + sum_{k_1..k_{d-1} >= 1} [prod_l 2^{-n_l} C(n_l, k_l)] *
//            p^linear(widths k_1..k_{d-1}, n_d; same sigmas)
//
// with atom = 1 - prod_l (1 - 2^{-n_l}) the probability that some hidden
// layer goes entirely inactive.  Wide layers make exhaustive enumeration
// explode, so terms below a weight threshold can be truncated, with the
// discarded mass tracked exactly.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"
#include "deepprior/linear_prior.hpp"
#include "deepprior/network_spec.hpp"

namespace deepprior {

enum class TruncationMode {
    none,        // keep every tuple
    per_factor,  // drop per-layer counts whose single-factor weight < threshold
    product,     // drop tuples whose total product weight < threshold
};

struct MixtureTerm {
    std::vector<int> counts;  // active units per hidden layer
    double log_weight = 0.0;
};

struct ReLUMixture {
    std::vector<MixtureTerm> terms;  // sorted by descending weight
    double atom_mass = 0.0;
    double discarded_mass = 0.0;
    TruncationMode mode = TruncationMode::product;
    double threshold = 0.0;

    double continuous_mass() const {
        double s = 0.0, comp = 0.0;
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            const double y = std::exp(it->log_weight) - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        return s;
    }
};

// P(some hidden layer is entirely inactive).
inline double atom_mass(const NetworkSpec& spec) {
    spec.validate();
    double s = 0.0;
    for (int l = 0; l + 1 < spec.depth(); ++l) {
        s += std::log1p(-std::ldexp(1.0, -spec.widths[l]));
    }
    return -std::expm1(s);
}

struct MixtureConfig {
    TruncationMode mode = TruncationMode::product;
    double threshold = 0x1p-52;
    std::size_t max_terms = 4000000;
};

namespace detail {

struct LayerWeights {
    std::vector<int> ks;          // sorted by descending weight
    std::vector<double> log_w;    // aligned with ks
    std::vector<double> suffix;   // suffix[i] = sum_{j >= i} exp(log_w[j])
    double full_sum = 0.0;        // 1 - 2^{-n}
};

inline LayerWeights layer_weights(int n) {
    LayerWeights lw;
    const double ln_half = -static_cast<double>(n) * std::log(2.0);
    std::vector<std::pair<double, int>> order;
    order.reserve(n);
    for (int k = 1; k <= n; ++k) {
        order.emplace_back(ln_half + log_binomial(n, k), k);
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    lw.ks.reserve(n);
    lw.log_w.reserve(n);
    for (const auto& [w, k] : order) {
        lw.ks.push_back(k);
        lw.log_w.push_back(w);
    }
    lw.suffix.assign(n + 1, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        lw.suffix[i] = lw.suffix[i + 1] + std::exp(lw.log_w[i]);
    }
    lw.full_sum = lw.suffix[0];
    return lw;
}

}  // namespace detail

inline ReLUMixture build_mixture(const NetworkSpec& spec,
                                 const MixtureConfig& cfg = {}) {
    spec.validate();
    if (cfg.mode != TruncationMode::none && !(cfg.threshold > 0.0)) {
        throw ConfigError("build_mixture: truncation threshold must be positive");
    }
    ReLUMixture mix;
    mix.mode = cfg.mode;
    mix.threshold = cfg.mode == TruncationMode::none ? 0.0 : cfg.threshold;
    mix.atom_mass = atom_mass(spec);

    const auto hidden = spec.hidden_widths();
    const int q = static_cast<int>(hidden.size());
    if (q == 0) {
        // Depth 1 has no activations: a single all-active term.
        mix.terms.push_back(MixtureTerm{{}, 0.0});
        return mix;
    }

    if (cfg.mode == TruncationMode::none) {
        double count = 1.0;
        for (int n : hidden) count *= static_cast<double>(n);
        if (count > static_cast<double>(cfg.max_terms)) {
            throw ResourceError(
                "build_mixture: untruncated mixture needs " +
                std::to_string(static_cast<std::uint64_t>(count)) +
                " terms; enable truncation or raise max_terms");
        }
    }

    std::vector<detail::LayerWeights> layers;
    layers.reserve(q);
    for (int n : hidden) layers.push_back(detail::layer_weights(n));

    const double log_thresh =
        cfg.mode == TruncationMode::none
            ? -std::numeric_limits<double>::infinity()
            : std::log(cfg.threshold);

    // Per-factor truncation filters each layer independently, then both
    // modes share the product-pruned depth-first enumeration (with the
    // per-factor pass the product threshold below is -inf again).
    double dropped = 0.0;
    if (cfg.mode == TruncationMode::per_factor) {
        double log_full = 0.0, log_kept = 0.0;
        for (auto& lw : layers) {
            std::size_t keep = lw.ks.size();
            while (keep > 0 && lw.log_w[keep - 1] < log_thresh) --keep;
            log_full += std::log(lw.full_sum);
            log_kept += std::log(lw.suffix[0] - lw.suffix[keep]);
            lw.ks.resize(keep);
            lw.log_w.resize(keep);
            const double tail = lw.suffix[keep];
            lw.suffix.resize(keep + 1);
            for (auto& s : lw.suffix) s -= tail;
            lw.full_sum = lw.suffix[0];
        }
        dropped = -std::exp(log_full) * std::expm1(log_kept - log_full);
    }
    const double log_prune =
        cfg.mode == TruncationMode::product ? log_thresh
                                            : -std::numeric_limits<double>::infinity();

    // Optimistic bound on whatever deeper layers can still contribute.
    std::vector<double> max_deeper(q + 1, 0.0);
    std::vector<double> full_deeper(q + 1, 1.0);
    for (int l = q - 1; l >= 0; --l) {
        max_deeper[l] = max_deeper[l + 1] + layers[l].log_w.front();
        full_deeper[l] = full_deeper[l + 1] * layers[l].full_sum;
    }

    std::vector<int> counts(q, 0);
    double dropped_comp = 0.0;
    auto drop_mass = [&](double mass) {
        const double y = mass - dropped_comp;
        const double t = dropped + y;
        dropped_comp = (t - dropped) - y;
        dropped = t;
    };

    // Depth-first over layers; descending weights let a failed bound cut
    // the rest of the layer at once.
    auto dfs = [&](auto&& self, int layer, double prefix_log) -> void {
        const auto& lw = layers[layer];
        for (std::size_t i = 0; i < lw.ks.size(); ++i) {
            const double cand = prefix_log + lw.log_w[i];
            if (cand + max_deeper[layer + 1] < log_prune) {
                drop_mass(std::exp(prefix_log) * lw.suffix[i] * full_deeper[layer + 1]);
                return;
            }
            counts[layer] = lw.ks[i];
            if (layer + 1 == q) {
                if (mix.terms.size() >= cfg.max_terms) {
                    throw ResourceError(
                        "build_mixture: term budget exhausted; use a coarser "
                        "truncation threshold or raise max_terms");
                }
                mix.terms.push_back(MixtureTerm{counts, cand});
            } else {
                self(self, layer + 1, cand);
            }
        }
    };
    dfs(dfs, 0, 0.0);
    mix.discarded_mass = dropped;

    std::stable_sort(mix.terms.begin(), mix.terms.end(),
                     [](const MixtureTerm& a, const MixtureTerm& b) {
                         if (a.log_weight != b.log_weight)
                             return a.log_weight > b.log_weight;
                         return a.counts < b.counts;
                     });
    return mix;
}

namespace detail {

// Permuting hidden widths permutes Gamma parameters only, so linear-term
// values can be shared across tuples with equal sorted counts.
template <typename Eval>
class SortedTupleCache {
public:
    explicit SortedTupleCache(Eval eval) : eval_(std::move(eval)) {}

    double operator()(const std::vector<int>& counts) {
        key_ = counts;
        std::sort(key_.begin(), key_.end());
        auto it = cache_.find(key_);
        if (it != cache_.end()) return it->second;
        const double v = eval_(key_);
        return cache_.emplace(key_, v).first->second;
    }

private:
    Eval eval_;
    std::vector<int> key_;
    std::map<std::vector<int>, double> cache_;
};

inline NetworkSpec term_spec(const NetworkSpec& spec, const std::vector<int>& counts) {
    std::vector<int> w;
    w.reserve(spec.widths.size());
    for (int k : counts) w.push_back(k);
    w.push_back(spec.out_width());
    return spec.with_widths(std::move(w));
}

}  // namespace detail

// Continuous part of the mixture density at radius r; the atom at 0 is
// reported separately by atom_mass / ReLUMixture.  Terms are accumulated
// in descending weight order with compensated summation.
inline DensityValue density_relu(const NetworkSpec& spec, double r,
                                 const ReLUMixture& mix,
                                 const ContourConfig& cfg = {}) {
    spec.validate();
    if (!(r >= 0.0)) {
        throw DomainError("density_relu: radius must be >= 0");
    }
    const int nd = spec.out_width();
    if (r == 0.0) {
        for (const auto& term : mix.terms) {
            int mn = nd + 1;
            for (int k : term.counts) mn = std::min(mn, k);
            if (!term.counts.empty() && mn <= nd) {
                return detail::divergent_density();
            }
        }
    }
    double worst_rel = 0.0;
    detail::SortedTupleCache cache([&](const std::vector<int>& sorted_counts) {
        const auto dv = density_linear(detail::term_spec(spec, sorted_counts), r, cfg);
        worst_rel = std::max(worst_rel, dv.rel_err_estimate);
        return dv.value;
    });
    double sum = 0.0, comp = 0.0;
    for (const auto& term : mix.terms) {
        const double y = std::exp(term.log_weight) * cache(term.counts) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    DensityValue out;
    out.value = sum;
    out.log_value = std::log(sum);
    out.rel_err_estimate = worst_rel;
    return out;
}

inline DensityValue density_relu(const NetworkSpec& spec, double r,
                                 const MixtureConfig& mcfg = {},
                                 const ContourConfig& cfg = {}) {
    return density_relu(spec, r, build_mixture(spec, mcfg), cfg);
}

// Full characteristic function, atom included:
//   phi(q) = atom + sum_t w_t phi^linear_t(q).
inline CharfunValue charfun_relu(const NetworkSpec& spec, double q,
                                 const ReLUMixture& mix,
                                 const ContourConfig& cfg = {}) {
    spec.validate();
    if (!(q >= 0.0)) {
        throw DomainError("charfun_relu: frequency must be >= 0");
    }
    double worst_rel = 0.0;
    detail::SortedTupleCache cache([&](const std::vector<int>& sorted_counts) {
        const auto cv = charfun_linear(detail::term_spec(spec, sorted_counts), q, cfg);
        worst_rel = std::max(worst_rel, cv.rel_err_estimate);
        return cv.value;
    });
    double sum = 0.0, comp = 0.0;
    auto add = [&](double y0) {
        const double y = y0 - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    add(mix.atom_mass);
    for (const auto& term : mix.terms) {
        add(std::exp(term.log_weight) * cache(term.counts));
    }
    CharfunValue out;
    out.value = sum;
    out.rel_err_estimate = worst_rel;
    return out;
}

inline CharfunValue charfun_relu(const NetworkSpec& spec, double q,
                                 const MixtureConfig& mcfg = {},
                                 const ContourConfig& cfg = {}) {
    return charfun_relu(spec, q, build_mixture(spec, mcfg), cfg);
}

// log E ||h||^m, computed from the untruncated mixture in closed form:
// the hidden layers contribute log-sum-exp factors over k, the output
// layer an ordinary chi moment.
inline double log_moment_norm_relu(const NetworkSpec& spec, double m) {
    spec.validate();
    if (!(m > -1.0)) {
        throw DomainError("log_moment_norm_relu: moment order must be > -1");
    }
    const auto c = prior_constants(spec);
    const int d = spec.depth();
    const double nd = spec.out_width();
    double s = 0.5 * d * m * std::log(2.0) + m * c.log_kappa +
               log_gamma(0.5 * (nd + m)) - log_gamma(0.5 * nd);
    for (int l = 0; l + 1 < d; ++l) {
        const int n = spec.widths[l];
        double mx = -std::numeric_limits<double>::infinity();
        std::vector<double> terms;
        terms.reserve(n);
        for (int k = 1; k <= n; ++k) {
            const double t = log_binomial(n, k) + log_gamma(0.5 * (k + m)) -
                             log_gamma(0.5 * k);
            terms.push_back(t);
            mx = std::max(mx, t);
        }
        double acc = 0.0;
        for (double t : terms) acc += std::exp(t - mx);
        s += mx + std::log(acc) - n * std::log(2.0);
    }
    return s;
}

inline double moment_norm_relu(const NetworkSpec& spec, double m) {
    if (m == 0.0) return 1.0;
    if (m == 2.0) {
        // E ||h||^2 = 2^{1-d} kappa^2 prod_l n_l: same width product as the
        // linear law, shifted by an exact power of two.
        spec.validate();
        return std::ldexp(detail::second_moment_width_product(spec),
                          1 - spec.depth());
    }
    return std::exp(log_moment_norm_relu(spec, m));
}

// 1-d output-component marginal (continuous part), via the width-1 stack.
inline DensityValue marginal_density_1d_relu(const NetworkSpec& spec, double h,
                                             const ReLUMixture& mix,
                                             const ContourConfig& cfg = {}) {
    std::vector<int> w = spec.widths;
    w.back() = 1;
    return density_relu(spec.with_widths(w), std::fabs(h), mix, cfg);
}

}  // namespace deepprior
