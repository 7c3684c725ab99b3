// Network description shared by every module: layer widths n_1..n_d,
// weight standard deviations sigma_1..sigma_d, input norm, activation.
// The single-input function-space prior depends on the input only through
// ||x|| and on the sigmas only through kappa = prod(sigma_l) * ||x||, so
// helpers for building specs from a target kappa are provided.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"

namespace deepprior {

enum class Activation {
    linear,
    relu,
};

struct NetworkSpec {
    std::vector<int> widths;        // n_1..n_d, output layer last
    std::vector<double> weight_std; // sigma_1..sigma_d
    double input_norm = 1.0;        // ||x||
    Activation activation = Activation::linear;

    int depth() const { return static_cast<int>(widths.size()); }
    int out_width() const { return widths.back(); }
    std::vector<int> hidden_widths() const {
        return std::vector<int>(widths.begin(), widths.end() - 1);
    }

    void validate() const {
        if (widths.empty()) {
            throw ConfigError("NetworkSpec: at least one layer is required");
        }
        if (weight_std.size() != widths.size()) {
            throw ConfigError("NetworkSpec: need one weight std per layer (got " +
                              std::to_string(weight_std.size()) + " for " +
                              std::to_string(widths.size()) + " layers)");
        }
        for (int n : widths) {
            if (n < 1 || n > 1000000) {
                throw ConfigError("NetworkSpec: widths must be in [1, 1000000]");
            }
        }
        for (double s : weight_std) {
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw ConfigError("NetworkSpec: weight stds must be positive and finite");
            }
        }
        if (!(input_norm > 0.0) || !std::isfinite(input_norm)) {
            throw ConfigError("NetworkSpec: input norm must be positive and finite");
        }
    }

    NetworkSpec with_widths(std::vector<int> new_widths) const {
        NetworkSpec out = *this;
        if (new_widths.size() != widths.size()) {
            throw ConfigError("with_widths: layer count must stay fixed");
        }
        out.widths = std::move(new_widths);
        return out;
    }
};

// Scale constants of the exact prior:
//   kappa       = prod_l sigma_l * ||x||
//   gamma_norm  = prod_{l<d} 1/Gamma(n_l/2)   (normalizer of the radial law)
struct PriorConstants {
    double kappa = 1.0;
    double log_kappa = 0.0;
    double log_gamma_norm = 0.0;
};

inline PriorConstants prior_constants(const NetworkSpec& spec) {
    spec.validate();
    PriorConstants c;
    double lk = std::log(spec.input_norm);
    for (double s : spec.weight_std) {
        lk += std::log(s);
    }
    c.log_kappa = lk;
    c.kappa = std::exp(lk);
    double lg = 0.0;
    for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
        lg -= log_gamma(0.5 * spec.widths[l]);
    }
    c.log_gamma_norm = lg;
    return c;
}

// How to pick the overall scale when only the architecture is given.
enum class KappaMode {
    // kappa^2 = 1 / prod(hidden widths): unit output variance for linear nets.
    unit_variance_linear,
    // kappa^2 = 2^{d-1} / prod(hidden widths): unit output variance for ReLU.
    unit_variance_relu,
    // kappa given explicitly.
    explicit_kappa,
};

// Builds a spec with ||x|| = 1 and equal per-layer sigmas realizing the
// requested kappa.
inline NetworkSpec make_spec(const std::vector<int>& widths, Activation act,
                             KappaMode mode, double kappa_value = 1.0) {
    NetworkSpec spec;
    spec.widths = widths;
    spec.activation = act;
    spec.input_norm = 1.0;
    const int d = static_cast<int>(widths.size());
    if (d < 1) {
        throw ConfigError("make_spec: at least one layer is required");
    }
    double log_kappa = 0.0;
    switch (mode) {
        case KappaMode::unit_variance_linear: {
            double s = 0.0;
            for (int l = 0; l + 1 < d; ++l) s += std::log(static_cast<double>(widths[l]));
            log_kappa = -0.5 * s;
            break;
        }
        case KappaMode::unit_variance_relu: {
            double s = 0.0;
            for (int l = 0; l + 1 < d; ++l) s += std::log(static_cast<double>(widths[l]));
            log_kappa = 0.5 * ((d - 1) * std::log(2.0) - s);
            break;
        }
        case KappaMode::explicit_kappa: {
            if (!(kappa_value > 0.0) || !std::isfinite(kappa_value)) {
                throw ConfigError("make_spec: explicit kappa must be positive");
            }
            log_kappa = std::log(kappa_value);
            break;
        }
    }
    spec.weight_std.assign(d, std::exp(log_kappa / d));
    spec.validate();
    return spec;
}

}  // namespace deepprior
