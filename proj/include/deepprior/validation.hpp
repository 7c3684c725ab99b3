#pragma once

// End-to-end quality gates: each check pins a quantitative tolerance and
// reports measured values, so a report is meaningful on failure too.  The
// checks are deterministic (fixed seeds, fixed grids) and independent of
// worker count; serializing two runs of the same configuration must yield
// byte-identical reports.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "deepprior/asymptotics.hpp"
#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"
#include "deepprior/hankel.hpp"
#include "deepprior/linear_prior.hpp"
#include "deepprior/mc_oracle.hpp"
#include "deepprior/nested_integral.hpp"
#include "deepprior/network_spec.hpp"
#include "deepprior/quadrature.hpp"
#include "deepprior/relu_prior.hpp"
#include "deepprior/tails.hpp"

namespace deepprior {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    // Ordered (key, value) pairs; keys are stable identifiers.
    std::vector<std::pair<std::string, double>> measured;
    std::string detail;
    double elapsed_seconds = 0.0;  // never serialized into reports
};

struct ValidationConfig {
    std::uint64_t seed = 1299827;
    std::size_t small_samples = 1000000;    // mass / variance MC checks
    std::size_t figure_samples = 10000000;  // histogram agreement check
    int workers = 0;                        // 0 = hardware concurrency
};

namespace valdetail {

inline std::string fmt(const char* f, double a) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

inline std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a, b);
    return buf;
}

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i) {
        g[i] = std::exp(la + (lb - la) * i / (n - 1.0));
    }
    return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * i / (n - 1.0);
    }
    return g;
}

inline double surface_area(int n) {
    return 2.0 * std::pow(kPi, 0.5 * n) / std::exp(log_gamma(0.5 * n));
}

// S_{nd-1} * integral of r^{nd-1+m} p(r) dr over [0, inf).  The head uses
// the singularity-tolerant substitution (harmless when p is smooth), the
// tail doubles octaves until negligible.
inline double radial_moment_quadrature(const std::function<double(double)>& p,
                                       int nd, double m, double scale) {
    QuadratureConfig qc;
    qc.rel_tol = 1e-9;
    auto f = [&](double r) { return std::pow(r, nd - 1 + m) * p(r); };
    const double split = std::max(scale, 1e-3);
    const double head = integrate_left_singular(f, 0.0, split, qc).value;
    const double tail = integrate_tail(f, split, 2.0 * split, qc).value;
    return surface_area(nd) * (head + tail);
}

// Exact probability mass of [lo, hi] under the continuous radial part.
inline double bin_probability(const std::function<double(double)>& p, int nd,
                              double lo, double hi, bool singular_origin) {
    QuadratureConfig qc;
    qc.rel_tol = 1e-7;
    auto f = [&](double r) { return std::pow(r, nd - 1) * p(r); };
    const double v = (singular_origin && lo == 0.0)
                         ? integrate_left_singular(f, lo, hi, qc).value
                         : integrate(f, lo, hi, qc).value;
    return surface_area(nd) * v;
}

inline NetworkSpec linear_spec(std::vector<int> widths, KappaMode mode,
                               double kappa = 1.0) {
    return make_spec(std::move(widths), Activation::linear, mode, kappa);
}

inline NetworkSpec relu_spec(std::vector<int> widths, KappaMode mode,
                             double kappa = 1.0) {
    return make_spec(std::move(widths), Activation::relu, mode, kappa);
}

inline std::string spec_label(const NetworkSpec& spec) {
    std::string s = spec.activation == Activation::relu ? "relu(" : "linear(";
    for (std::size_t i = 0; i < spec.widths.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(spec.widths[i]);
    }
    s += ")";
    return s;
}

template <class Body>
CheckResult timed_check(int id, const char* name, Body&& body) {
    CheckResult r;
    r.id = id;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return r;
}

}  // namespace valdetail

// 1. Depth-2 contour evaluator against the Bessel-K closed form.
inline CheckResult check_closed_form_agreement() {
    return valdetail::timed_check(1, "closed-form-agreement", [](CheckResult& r) {
        constexpr double kTol = 1e-9;
        const auto grid = valdetail::geometric_grid(0.01, 10.0, 100);
        double worst = 0.0;
        std::string worst_at;
        for (int n1 : {1, 2, 5, 25, 100}) {
            for (int n2 : {1, 2}) {
                const auto spec = valdetail::linear_spec(
                    {n1, n2}, KappaMode::explicit_kappa, 1.0);
                for (double rr : grid) {
                    const double closed = density_two_layer(spec, rr).value;
                    const double contour =
                        density_linear_meijer(spec, rr).value;
                    const double rel =
                        std::fabs(contour - closed) / std::fabs(closed);
                    if (rel > worst) {
                        worst = rel;
                        worst_at = valdetail::spec_label(spec) +
                                   valdetail::fmt(" r=%.4g", rr);
                    }
                }
            }
        }
        r.measured.emplace_back("max_rel_err", worst);
        r.measured.emplace_back("tolerance", kTol);
        r.pass = worst <= kTol;
        r.detail = valdetail::fmt("max rel err %.3e (tol %.0e)", worst, kTol) +
                   " at " + worst_at;
    });
}

// 2. Contour density against the nested-integral oracle for d = 3, 4.
inline CheckResult check_oracle_agreement() {
    return valdetail::timed_check(2, "oracle-agreement", [](CheckResult& r) {
        constexpr double kTol = 1e-7;
        const auto grid = valdetail::geometric_grid(0.05, 8.0, 40);
        double worst = 0.0;
        std::string worst_at;
        for (const auto& widths :
             {std::vector<int>{4, 7, 2}, std::vector<int>{3, 5, 9, 1}}) {
            const auto spec = valdetail::linear_spec(
                widths, KappaMode::unit_variance_linear);
            const auto c = prior_constants(spec);
            const int d = spec.depth();
            const double nd = spec.out_width();
            std::vector<double> nus;
            for (int l = 0; l + 1 < d; ++l) {
                nus.push_back(0.5 * (spec.widths[l] - nd));
            }
            FqEvaluator oracle(nus);
            const double log_pref =
                c.log_gamma_norm -
                0.5 * nd * (d * std::log(2.0) + std::log(kPi) +
                            2.0 * c.log_kappa);
            for (double rr : grid) {
                const double z = std::exp(2.0 * std::log(rr) -
                                          d * std::log(2.0) - 2.0 * c.log_kappa);
                const double want = std::exp(log_pref + oracle.log_value(z));
                const double got = density_linear(spec, rr).value;
                const double rel = std::fabs(got - want) / std::fabs(want);
                if (rel > worst) {
                    worst = rel;
                    worst_at = valdetail::spec_label(spec) +
                               valdetail::fmt(" r=%.4g", rr);
                }
            }
        }
        r.measured.emplace_back("max_rel_err", worst);
        r.measured.emplace_back("tolerance", kTol);
        r.pass = worst <= kTol;
        r.detail = valdetail::fmt("max rel err %.3e (tol %.0e)", worst, kTol) +
                   " at " + worst_at;
    });
}

namespace valdetail {

inline std::vector<NetworkSpec> representative_specs() {
    using KM = KappaMode;
    std::vector<NetworkSpec> specs;
    specs.push_back(linear_spec({3, 1}, KM::explicit_kappa, 1.0));
    specs.push_back(linear_spec({5, 5, 1}, KM::unit_variance_linear));
    specs.push_back(linear_spec({1, 2}, KM::explicit_kappa, 0.8));
    specs.push_back(linear_spec({100, 2, 100, 1}, KM::unit_variance_linear));
    specs.push_back(linear_spec({2, 3, 1}, KM::explicit_kappa, 1.0));
    specs.push_back(relu_spec({1, 1}, KM::explicit_kappa, 1.0));
    specs.push_back(relu_spec({3, 1}, KM::unit_variance_relu));
    specs.push_back(relu_spec({5, 5, 1}, KM::unit_variance_relu));
    specs.push_back(relu_spec({3, 3, 3, 2}, KM::unit_variance_relu));
    specs.push_back(relu_spec({4, 2, 1}, KM::explicit_kappa, 0.9));
    return specs;
}

}  // namespace valdetail

// 3. Radial mass and closed-form norm moments (m = 2, 4, 6) by quadrature.
inline CheckResult check_normalization_moments() {
    return valdetail::timed_check(3, "normalization-and-moments",
                                  [](CheckResult& r) {
        constexpr double kMassTol = 1e-6;
        constexpr double kMomentTol = 1e-5;
        double worst_mass = 0.0, worst_moment = 0.0;
        std::string worst_at;
        for (const auto& spec : valdetail::representative_specs()) {
            const bool is_relu = spec.activation == Activation::relu;
            ReLUMixture mix;
            double atom = 0.0;
            if (is_relu) {
                mix = build_mixture(spec);
                atom = mix.atom_mass;
            }
            std::function<double(double)> p;
            if (is_relu) {
                p = [&spec, &mix](double rr) {
                    return density_relu(spec, rr, mix).value;
                };
            } else {
                p = [&spec](double rr) {
                    return density_linear(spec, rr).value;
                };
            }
            const double m2 = is_relu ? moment_norm_relu(spec, 2.0)
                                      : moment_norm_linear(spec, 2.0);
            const double scale = std::sqrt(m2);
            const int nd = spec.out_width();
            const double mass =
                valdetail::radial_moment_quadrature(p, nd, 0.0, scale);
            const double mass_err = std::fabs(atom + mass - 1.0);
            if (mass_err > worst_mass) {
                worst_mass = mass_err;
                worst_at = valdetail::spec_label(spec);
            }
            for (double m : {2.0, 4.0, 6.0}) {
                const double want = is_relu ? moment_norm_relu(spec, m)
                                            : moment_norm_linear(spec, m);
                const double got =
                    valdetail::radial_moment_quadrature(p, nd, m, scale);
                const double rel = std::fabs(got - want) / std::fabs(want);
                if (rel > worst_moment) {
                    worst_moment = rel;
                    worst_at = valdetail::spec_label(spec) +
                               valdetail::fmt(" m=%.0f", m);
                }
            }
        }
        r.measured.emplace_back("max_mass_err", worst_mass);
        r.measured.emplace_back("mass_tolerance", kMassTol);
        r.measured.emplace_back("max_moment_rel_err", worst_moment);
        r.measured.emplace_back("moment_tolerance", kMomentTol);
        r.pass = worst_mass <= kMassTol && worst_moment <= kMomentTol;
        r.detail =
            valdetail::fmt("max mass err %.3e, ", worst_mass) +
            valdetail::fmt("max moment rel err %.3e; worst ", worst_moment) +
            worst_at;
    });
}

// 4. Inverse Hankel transform of the characteristic function against the
// density, pointwise across the radial range.
inline CheckResult check_fourier_pairs() {
    return valdetail::timed_check(4, "fourier-pair", [](CheckResult& r) {
        constexpr double kRelTol = 1e-4;
        constexpr double kAbsFloor = 1e-10;
        const std::vector<double> radii = {0.05, 0.3, 1.0, 2.0, 3.5, 5.0, 8.0};
        std::vector<NetworkSpec> specs;
        specs.push_back(valdetail::linear_spec({2, 1}, KappaMode::explicit_kappa, 1.0));
        specs.push_back(valdetail::linear_spec({7, 2}, KappaMode::unit_variance_linear));
        specs.push_back(valdetail::linear_spec({3, 4, 1}, KappaMode::unit_variance_linear));
        specs.push_back(valdetail::linear_spec({5, 2, 2}, KappaMode::explicit_kappa, 0.7));
        double worst = 0.0;
        std::string worst_at;
        for (const auto& spec : specs) {
            auto phi = [&spec](double q) {
                return charfun_linear(spec, q).value;
            };
            for (double rr : radii) {
                const double want = density_linear(spec, rr).value;
                const double got = hankel_radial_point(
                    phi, spec.out_width(), HankelDirection::inverse, rr);
                const double err = std::fabs(got - want);
                const double rel = err / std::max(std::fabs(want), kAbsFloor / kRelTol);
                if (rel > worst) {
                    worst = rel;
                    worst_at = valdetail::spec_label(spec) +
                               valdetail::fmt(" r=%.4g", rr);
                }
            }
        }
        r.measured.emplace_back("max_rel_err", worst);
        r.measured.emplace_back("tolerance", kRelTol);
        r.pass = worst <= kRelTol;
        r.detail = valdetail::fmt("max rel err %.3e (tol %.0e)", worst, kRelTol) +
                   " at " + worst_at;
    });
}

// 5. Product-mode truncation at threshold 2^-52 reproduces the exact
// width-100 summand counts.
inline CheckResult check_mixture_counts() {
    return valdetail::timed_check(5, "mixture-counts", [](CheckResult& r) {
        const std::vector<std::pair<std::vector<int>, std::size_t>> cases = {
            {{100, 1}, 77},
            {{100, 100, 1}, 4537},
            {{100, 100, 100, 1}, 208243},
        };
        bool ok = true;
        std::string detail;
        for (const auto& [widths, want] : cases) {
            const auto spec =
                valdetail::relu_spec(widths, KappaMode::unit_variance_relu);
            MixtureConfig cfg;
            cfg.mode = TruncationMode::product;
            const auto mix = build_mixture(spec, cfg);
            const std::size_t got = mix.terms.size();
            r.measured.emplace_back(
                "terms_d" + std::to_string(widths.size()),
                static_cast<double>(got));
            if (got != want) {
                ok = false;
                detail += valdetail::spec_label(spec) + ": got " +
                          std::to_string(got) + " want " +
                          std::to_string(want) + "; ";
            }
        }
        r.pass = ok;
        r.detail = ok ? "term counts 77 / 4537 / 208243 reproduced exactly"
                      : detail;
    });
}

// 6. Mixture mass ledger closes, and the Monte Carlo zero fraction matches
// the atom mass within 3 binomial standard deviations.
inline CheckResult check_mass_conservation(const ValidationConfig& vcfg = {}) {
    return valdetail::timed_check(6, "mass-conservation", [&](CheckResult& r) {
        constexpr double kLedgerTol = 1e-5;
        double worst_ledger = 0.0;
        for (const auto& spec : valdetail::representative_specs()) {
            if (spec.activation != Activation::relu) continue;
            const auto mix = build_mixture(spec);
            const double total =
                mix.atom_mass + mix.continuous_mass() + mix.discarded_mass;
            worst_ledger = std::max(worst_ledger, std::fabs(total - 1.0));
        }
        std::vector<NetworkSpec> mc_specs;
        mc_specs.push_back(valdetail::relu_spec({1, 1}, KappaMode::explicit_kappa, 1.0));
        mc_specs.push_back(valdetail::relu_spec({2, 3, 1}, KappaMode::unit_variance_relu));
        mc_specs.push_back(valdetail::relu_spec({5, 5, 1}, KappaMode::unit_variance_relu));
        McConfig mcfg;
        mcfg.workers = vcfg.workers;
        mcfg.max_store_doubles = 0;  // streaming is enough here
        double worst_sigma = 0.0;
        std::string worst_at;
        const std::size_t n = vcfg.small_samples;
        int idx = 0;
        for (const auto& spec : mc_specs) {
            const auto batch =
                sample_outputs(spec, vcfg.seed + 60 + idx, n, mcfg);
            const double atom = atom_mass(spec);
            const double frac =
                static_cast<double>(batch.zero_count) / static_cast<double>(n);
            const double sigma =
                std::sqrt(std::max(atom * (1.0 - atom), 1e-300) / n);
            const double dev = std::fabs(frac - atom) / sigma;
            if (dev > worst_sigma) {
                worst_sigma = dev;
                worst_at = valdetail::spec_label(spec);
            }
            ++idx;
        }
        r.measured.emplace_back("max_ledger_err", worst_ledger);
        r.measured.emplace_back("ledger_tolerance", kLedgerTol);
        r.measured.emplace_back("max_zero_fraction_sigma", worst_sigma);
        r.measured.emplace_back("sigma_limit", 3.0);
        r.pass = worst_ledger <= kLedgerTol && worst_sigma <= 3.0;
        r.detail = valdetail::fmt("ledger err %.3e, ", worst_ledger) +
                   valdetail::fmt("zero fraction within %.2f sigma", worst_sigma) +
                   " (worst " + worst_at + ")";
    });
}

// 7. Exact 2^{1-d} second-moment ratio between activations (bitwise) plus
// Monte Carlo confirmation within 3 standard errors.
inline CheckResult check_variance_ratio(const ValidationConfig& vcfg = {}) {
    return valdetail::timed_check(7, "variance-ratio", [&](CheckResult& r) {
        int mismatches = 0;
        for (const auto& widths : {std::vector<int>{3, 1},
                                   std::vector<int>{4, 7, 2},
                                   std::vector<int>{2, 2, 2, 5}}) {
            const auto lin =
                valdetail::linear_spec(widths, KappaMode::explicit_kappa, 1.7);
            const auto rel =
                valdetail::relu_spec(widths, KappaMode::explicit_kappa, 1.7);
            const double want = std::ldexp(moment_norm_linear(lin, 2.0),
                                           1 - lin.depth());
            if (moment_norm_relu(rel, 2.0) != want) ++mismatches;
        }
        McConfig mcfg;
        mcfg.workers = vcfg.workers;
        mcfg.max_store_doubles = 0;
        double worst_se = 0.0;
        int idx = 0;
        for (const auto act : {Activation::linear, Activation::relu}) {
            const auto spec = make_spec({4, 7, 2}, act,
                                        KappaMode::explicit_kappa, 1.7);
            const auto batch = sample_outputs(spec, vcfg.seed + 70 + idx,
                                              vcfg.small_samples, mcfg);
            const auto est = empirical_moment(batch, 2.0);
            const double want = act == Activation::relu
                                    ? moment_norm_relu(spec, 2.0)
                                    : moment_norm_linear(spec, 2.0);
            const double dev = std::fabs(est.mean - want) / est.std_error;
            worst_se = std::max(worst_se, dev);
            ++idx;
        }
        r.measured.emplace_back("bitwise_mismatches",
                                static_cast<double>(mismatches));
        r.measured.emplace_back("max_moment_se", worst_se);
        r.measured.emplace_back("se_limit", 3.0);
        r.pass = mismatches == 0 && worst_se <= 3.0;
        r.detail = std::to_string(mismatches) + " bitwise mismatches; " +
                   valdetail::fmt("MC second moment within %.2f SE", worst_se);
    });
}

// 8. Sampled histograms against exact bin probabilities across the width
// sweep; every bin with enough expected mass must sit within 4 sigma.
inline CheckResult check_histogram_agreement(const ValidationConfig& vcfg = {}) {
    return valdetail::timed_check(8, "histogram-agreement", [&](CheckResult& r) {
        constexpr double kZLimit = 4.0;
        constexpr int kBins = 50;
        constexpr double kHi = 5.0;
        double worst_z = 0.0;
        int bins_tested = 0;
        std::string worst_at;
        McConfig mcfg;
        mcfg.workers = vcfg.workers;
        for (int d : {2, 3, 4}) {
            for (int w : {1, 2, 5}) {
                for (const auto act : {Activation::linear, Activation::relu}) {
                    std::vector<int> widths(d - 1, w);
                    widths.push_back(1);
                    const bool is_relu = act == Activation::relu;
                    const auto spec = make_spec(
                        widths, act,
                        is_relu ? KappaMode::unit_variance_relu
                                : KappaMode::unit_variance_linear);
                    const std::uint64_t seed =
                        vcfg.seed + 800 + 100 * d + 10 * w + (is_relu ? 1 : 0);
                    const auto batch = sample_outputs(spec, seed,
                                                      vcfg.figure_samples, mcfg);
                    const auto hist =
                        make_histogram(batch, true, kBins, 0.0, kHi);
                    ReLUMixture mix;
                    if (is_relu) mix = build_mixture(spec);
                    std::function<double(double)> p;
                    if (is_relu) {
                        p = [&spec, &mix](double rr) {
                            return density_relu(spec, rr, mix).value;
                        };
                    } else {
                        p = [&spec](double rr) {
                            return density_linear(spec, rr).value;
                        };
                    }
                    const bool singular =
                        (is_relu ? density_relu(spec, 0.0, mix)
                                 : density_linear(spec, 0.0))
                            .divergent;
                    std::vector<double> probs(kBins);
                    for (int b = 0; b < kBins; ++b) {
                        probs[b] = valdetail::bin_probability(
                            p, spec.out_width(), hist.edges[b],
                            hist.edges[b + 1], singular);
                    }
                    const auto rep = compare_density(hist, probs);
                    bins_tested += rep.bins_tested;
                    if (rep.max_abs_z > worst_z) {
                        worst_z = rep.max_abs_z;
                        worst_at = valdetail::spec_label(spec);
                    }
                }
            }
        }
        r.measured.emplace_back("max_abs_z", worst_z);
        r.measured.emplace_back("z_limit", kZLimit);
        r.measured.emplace_back("bins_tested", static_cast<double>(bins_tested));
        r.pass = worst_z <= kZLimit && bins_tested > 100;
        r.detail = valdetail::fmt("max |z| %.2f over ", worst_z) +
                   std::to_string(bins_tested) + " bins; worst " + worst_at;
    });
}

// 9. Fitted tail exponents reach d/2 for both activations.
inline CheckResult check_tail_exponents() {
    return valdetail::timed_check(9, "tail-exponents", [](CheckResult& r) {
        constexpr double kTol = 0.05;
        std::vector<double> orders;
        for (int m = 2; m <= 400; m += 2) orders.push_back(m);
        double worst = 0.0;
        std::string worst_at;
        for (int d = 1; d <= 4; ++d) {
            std::vector<int> widths(d - 1, 2);
            widths.push_back(1);
            for (const auto act : {Activation::linear, Activation::relu}) {
                const auto spec =
                    make_spec(widths, act, KappaMode::explicit_kappa, 1.0);
                const auto est =
                    estimate_tail_parameter(root_moment_curve(spec, orders));
                const double err = std::fabs(est.theta_hat - 0.5 * d);
                if (err > worst) {
                    worst = err;
                    worst_at = valdetail::spec_label(spec) +
                               valdetail::fmt(" theta_hat=%.4f", est.theta_hat);
                }
            }
        }
        r.measured.emplace_back("max_theta_err", worst);
        r.measured.emplace_back("tolerance", kTol);
        r.pass = worst <= kTol;
        r.detail = valdetail::fmt("max |theta_hat - d/2| = %.4f (tol %.2f); ",
                                  worst, kTol) +
                   "worst " + worst_at;
    });
}

// 10. Edgeworth behavior: the exact density dominates the approximation
// beyond a crossover radius with a widening gap, while at width 100 the
// bulk agreement is tight.
inline CheckResult check_edgeworth_behavior() {
    return valdetail::timed_check(10, "edgeworth-crossover", [](CheckResult& r) {
        constexpr double kRatioFloor = 10.0;
        constexpr double kBulkTol = 5e-4;
        bool crossover_ok = true;
        double min_ratio = std::numeric_limits<double>::infinity();
        double worst_bulk = 0.0;
        std::string detail;
        for (int d : {3, 4}) {
            {
                std::vector<int> widths(d - 1, 10);
                widths.push_back(1);
                const auto spec = valdetail::linear_spec(
                    widths, KappaMode::unit_variance_linear);
                const auto ws = WidthScaledSpec::from_spec(spec);
                const auto grid = valdetail::linear_grid(0.0, 6.0, 121);
                std::vector<double> exact(grid.size()), edge(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    exact[i] = density_linear(spec, grid[i]).value;
                    edge[i] = edgeworth_density(ws, grid[i]).value;
                }
                // Smallest radius beyond which exact > edgeworth everywhere.
                std::size_t cross = grid.size();
                for (std::size_t i = grid.size(); i-- > 0;) {
                    if (exact[i] > edge[i]) {
                        cross = i;
                    } else {
                        break;
                    }
                }
                const bool found = cross + 1 < grid.size();
                crossover_ok = crossover_ok && found;
                const double ratio = exact.back() / edge.back();
                min_ratio = std::min(min_ratio, ratio);
                detail += valdetail::fmt("d=%.0f: ", static_cast<double>(d)) +
                          (found ? valdetail::fmt("crossover r=%.2f, ",
                                                  grid[cross])
                                 : std::string("no crossover, ")) +
                          valdetail::fmt("tail ratio %.1f; ", ratio);
            }
            {
                std::vector<int> widths(d - 1, 100);
                widths.push_back(1);
                const auto spec = valdetail::linear_spec(
                    widths, KappaMode::unit_variance_linear);
                const auto ws = WidthScaledSpec::from_spec(spec);
                for (double rr : valdetail::linear_grid(0.0, 3.0, 61)) {
                    const double gap =
                        std::fabs(density_linear(spec, rr).value -
                                  edgeworth_density(ws, rr).value);
                    worst_bulk = std::max(worst_bulk, gap);
                }
            }
        }
        r.measured.emplace_back("crossover_found", crossover_ok ? 1.0 : 0.0);
        r.measured.emplace_back("min_tail_ratio", min_ratio);
        r.measured.emplace_back("ratio_floor", kRatioFloor);
        r.measured.emplace_back("max_bulk_gap", worst_bulk);
        r.measured.emplace_back("bulk_tolerance", kBulkTol);
        r.pass = crossover_ok && min_ratio > kRatioFloor &&
                 worst_bulk <= kBulkTol;
        r.detail = detail + valdetail::fmt("width-100 bulk gap %.2e", worst_bulk);
    });
}

// Serialization: flat JSON, doubles at full round-trip precision, no
// timestamps or timings, so identical runs produce identical bytes.
namespace valdetail {

inline void json_escape_into(std::string& out, const std::string& s) {
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
}

inline std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace valdetail

inline std::string validation_report_json(
    const std::vector<CheckResult>& checks) {
    std::string out = "{\n  \"schema\": \"deepprior-validate-1\",\n";
    bool all = true;
    for (const auto& c : checks) all = all && c.pass;
    out += std::string("  \"all_pass\": ") + (all ? "true" : "false") +
           ",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        out += "    {\"id\": " + std::to_string(c.id) + ", \"name\": \"";
        valdetail::json_escape_into(out, c.name);
        out += std::string("\", \"pass\": ") + (c.pass ? "true" : "false");
        out += ", \"measured\": {";
        for (std::size_t j = 0; j < c.measured.size(); ++j) {
            if (j) out += ", ";
            out += "\"";
            valdetail::json_escape_into(out, c.measured[j].first);
            out += "\": " + valdetail::json_number(c.measured[j].second);
        }
        out += "}, \"detail\": \"";
        valdetail::json_escape_into(out, c.detail);
        out += "\"}";
        if (i + 1 < checks.size()) out += ",";
        out += "\n";
    }
    out += "  ]\n}\n";
    return out;
}

// 11. Determinism: two in-process runs of a fast check subset serialize to
// byte-identical reports.
inline CheckResult check_determinism(const ValidationConfig& vcfg = {}) {
    return valdetail::timed_check(11, "determinism", [&](CheckResult& r) {
        auto subset = [&] {
            std::vector<CheckResult> cs;
            cs.push_back(check_mixture_counts());
            cs.push_back(check_mass_conservation(vcfg));
            cs.push_back(check_tail_exponents());
            return validation_report_json(cs);
        };
        const std::string a = subset();
        const std::string b = subset();
        r.measured.emplace_back("bytes", static_cast<double>(a.size()));
        r.measured.emplace_back("identical", a == b ? 1.0 : 0.0);
        r.pass = !a.empty() && a == b;
        r.detail = r.pass ? "two in-process runs serialized identically"
                          : "reports differ between identical runs";
    });
}

inline CheckResult run_check(int id, const ValidationConfig& vcfg = {}) {
    switch (id) {
        case 1: return check_closed_form_agreement();
        case 2: return check_oracle_agreement();
        case 3: return check_normalization_moments();
        case 4: return check_fourier_pairs();
        case 5: return check_mixture_counts();
        case 6: return check_mass_conservation(vcfg);
        case 7: return check_variance_ratio(vcfg);
        case 8: return check_histogram_agreement(vcfg);
        case 9: return check_tail_exponents();
        case 10: return check_edgeworth_behavior();
        case 11: return check_determinism(vcfg);
        default:
            throw ConfigError("run_check: unknown check id " +
                              std::to_string(id));
    }
}

inline std::vector<CheckResult> run_validation_suite(
    const ValidationConfig& vcfg = {}, std::vector<int> ids = {}) {
    if (ids.empty()) {
        for (int i = 1; i <= 11; ++i) ids.push_back(i);
    }
    std::vector<CheckResult> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(run_check(id, vcfg));
    return out;
}

}  // namespace deepprior
