// Monte Carlo oracle: samples the prior by drawing every weight entry
// explicitly and running the forward pass, sharing no formulas with the
// exact modules it validates.  Sampling is chunked; chunk c uses the RNG
// stream (master_seed, c) and chunks are merged in index order, so the
// output is byte-identical for any worker count.  ReLU networks emit an
// exact zero vector whenever a hidden layer goes fully inactive, which the
// forward pass reproduces in floating point (0 propagates exactly), giving
// a direct check of the atom mass.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "deepprior/errors.hpp"
#include "deepprior/network_spec.hpp"
#include "deepprior/rng.hpp"

namespace deepprior {

struct McConfig {
    std::size_t chunk_size = 65536;
    // Above this many stored doubles, outputs are dropped and only
    // streaming summaries (moment sums, zero counts, planned histogram)
    // are kept.
    std::size_t max_store_doubles = 60000000;
    int workers = 0;  // 0 = hardware concurrency
    std::vector<double> stream_orders = {2.0, 4.0, 6.0, 8.0};
};

// Pre-committed histogram for streaming mode (stored batches can bin after
// the fact; a stream cannot).
struct HistogramPlan {
    bool radial = true;  // bin ||h||; otherwise bin component `index`
    int component = 0;
    int bins = 0;
    double lo = 0.0;
    double hi = 0.0;
};

struct SampleBatch {
    NetworkSpec spec;
    std::uint64_t master_seed = 0;
    std::size_t count = 0;
    std::size_t chunk_size = 0;
    std::size_t zero_count = 0;  // exact zero output vectors (ReLU atom)
    bool stored = false;

    // Stored mode: outputs (count x out_width, chunk order) and per-sample
    // atom flags.
    std::vector<double> outputs;
    std::vector<std::uint8_t> is_zero;

    // Streaming summaries, always present: per-chunk sums of ||h||^m for
    // each configured order, plus chunk sizes.
    std::vector<double> stream_orders;
    std::vector<std::vector<double>> chunk_power_sums;  // [order][chunk]
    std::vector<std::size_t> chunk_sizes;

    // Streaming histogram, if planned.
    bool has_planned_hist = false;
    HistogramPlan plan;
    std::vector<std::uint64_t> planned_counts;
    std::uint64_t planned_out_of_range = 0;
};

namespace detail {

struct ChunkSummary {
    std::vector<double> outputs;
    std::vector<std::uint8_t> is_zero;
    std::size_t zero_count = 0;
    std::vector<double> power_sums;
    std::vector<std::uint64_t> hist;
    std::uint64_t out_of_range = 0;
    std::size_t size = 0;
};

inline void run_chunk(const NetworkSpec& spec, std::uint64_t master_seed,
                      std::uint64_t chunk_index, std::size_t n_samples,
                      bool store, const McConfig& cfg,
                      const HistogramPlan* plan, ChunkSummary& out) {
    const int d = spec.depth();
    const int nd = spec.out_width();
    const bool relu = spec.activation == Activation::relu;
    int max_w = 0;
    for (int n : spec.widths) max_w = std::max(max_w, n);

    CounterRng rng(master_seed, chunk_index);
    std::vector<double> cur(max_w), nxt(max_w), act(max_w);

    out.size = n_samples;
    out.power_sums.assign(cfg.stream_orders.size(), 0.0);
    if (store) {
        out.outputs.reserve(n_samples * nd);
        out.is_zero.reserve(n_samples);
    }
    if (plan) {
        out.hist.assign(plan->bins, 0);
    }

    for (std::size_t s = 0; s < n_samples; ++s) {
        // First layer: h_1 = sigma_1 g ||x|| with g ~ N(0, I).
        for (int i = 0; i < spec.widths[0]; ++i) {
            cur[i] = spec.weight_std[0] * rng.normal() * spec.input_norm;
        }
        for (int l = 1; l < d; ++l) {
            const int n_in = spec.widths[l - 1];
            const int n_out = spec.widths[l];
            for (int j = 0; j < n_in; ++j) {
                act[j] = relu ? std::max(cur[j], 0.0) : cur[j];
            }
            for (int i = 0; i < n_out; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n_in; ++j) {
                    acc += rng.normal() * act[j];
                }
                nxt[i] = spec.weight_std[l] * acc;
            }
            std::swap(cur, nxt);
        }

        double r2 = 0.0;
        bool all_zero = true;
        for (int i = 0; i < nd; ++i) {
            r2 += cur[i] * cur[i];
            all_zero = all_zero && cur[i] == 0.0;
        }
        if (all_zero) ++out.zero_count;

        for (std::size_t oi = 0; oi < cfg.stream_orders.size(); ++oi) {
            const double m = cfg.stream_orders[oi];
            out.power_sums[oi] +=
                m == 2.0 ? r2 : (r2 == 0.0 ? 0.0 : std::pow(r2, 0.5 * m));
        }
        if (store) {
            for (int i = 0; i < nd; ++i) out.outputs.push_back(cur[i]);
            out.is_zero.push_back(all_zero ? 1 : 0);
        }
        if (plan && !all_zero) {
            const double v = plan->radial ? std::sqrt(r2) : cur[plan->component];
            const double w = (plan->hi - plan->lo) / plan->bins;
            const double pos = (v - plan->lo) / w;
            if (pos >= 0.0 && pos < plan->bins) {
                ++out.hist[static_cast<std::size_t>(pos)];
            } else {
                ++out.out_of_range;
            }
        }
    }
}

}  // namespace detail

inline SampleBatch sample_outputs(const NetworkSpec& spec,
                                  std::uint64_t master_seed, std::size_t count,
                                  const McConfig& cfg = {},
                                  const HistogramPlan* plan = nullptr) {
    spec.validate();
    if (count == 0) {
        throw ConfigError("sample_outputs: sample count must be positive");
    }
    if (cfg.chunk_size == 0) {
        throw ConfigError("sample_outputs: chunk size must be positive");
    }
    if (plan && (plan->bins <= 0 || !(plan->hi > plan->lo))) {
        throw ConfigError("sample_outputs: histogram plan needs bins > 0 and hi > lo");
    }
    SampleBatch batch;
    batch.spec = spec;
    batch.master_seed = master_seed;
    batch.count = count;
    batch.chunk_size = cfg.chunk_size;
    batch.stream_orders = cfg.stream_orders;
    batch.stored =
        count * static_cast<std::size_t>(spec.out_width()) <= cfg.max_store_doubles;
    if (plan) {
        batch.has_planned_hist = true;
        batch.plan = *plan;
        batch.planned_counts.assign(plan->bins, 0);
    }

    const std::size_t n_chunks = (count + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<detail::ChunkSummary> chunks(n_chunks);

    int workers = cfg.workers > 0
                      ? cfg.workers
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), n_chunks));

    auto work = [&](std::atomic<std::size_t>& next) {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            const std::size_t lo = c * cfg.chunk_size;
            const std::size_t n = std::min(cfg.chunk_size, count - lo);
            detail::run_chunk(spec, master_seed, c, n, batch.stored, cfg,
                              plan, chunks[c]);
        }
    };
    std::atomic<std::size_t> next{0};
    if (workers <= 1) {
        work(next);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back([&] { work(next); });
        for (auto& t : pool) t.join();
    }

    // Merge in chunk-index order regardless of completion order.
    batch.chunk_power_sums.assign(cfg.stream_orders.size(), {});
    for (auto& v : batch.chunk_power_sums) v.reserve(n_chunks);
    batch.chunk_sizes.reserve(n_chunks);
    if (batch.stored) {
        batch.outputs.reserve(count * spec.out_width());
        batch.is_zero.reserve(count);
    }
    for (auto& ch : chunks) {
        batch.zero_count += ch.zero_count;
        batch.chunk_sizes.push_back(ch.size);
        for (std::size_t oi = 0; oi < cfg.stream_orders.size(); ++oi) {
            batch.chunk_power_sums[oi].push_back(ch.power_sums[oi]);
        }
        if (batch.stored) {
            batch.outputs.insert(batch.outputs.end(), ch.outputs.begin(),
                                 ch.outputs.end());
            batch.is_zero.insert(batch.is_zero.end(), ch.is_zero.begin(),
                                 ch.is_zero.end());
        }
        if (batch.has_planned_hist) {
            batch.planned_out_of_range += ch.out_of_range;
            for (int b = 0; b < batch.plan.bins; ++b) {
                batch.planned_counts[b] += ch.hist[b];
            }
        }
    }
    return batch;
}

struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

// Mean of ||h||^m with a batch-means standard error over chunks.
inline MomentEstimate empirical_moment(const SampleBatch& batch, double m) {
    if (m == 0.0) {
        return MomentEstimate{1.0, 0.0, batch.count};
    }
    const std::size_t n_chunks = batch.chunk_sizes.size();
    std::vector<double> chunk_sums;
    auto it = std::find(batch.stream_orders.begin(), batch.stream_orders.end(), m);
    if (it != batch.stream_orders.end()) {
        chunk_sums = batch.chunk_power_sums[it - batch.stream_orders.begin()];
    } else if (batch.stored) {
        const int nd = batch.spec.out_width();
        chunk_sums.assign(n_chunks, 0.0);
        std::size_t s = 0;
        for (std::size_t c = 0; c < n_chunks; ++c) {
            for (std::size_t k = 0; k < batch.chunk_sizes[c]; ++k, ++s) {
                double r2 = 0.0;
                for (int i = 0; i < nd; ++i) {
                    const double v = batch.outputs[s * nd + i];
                    r2 += v * v;
                }
                chunk_sums[c] += r2 == 0.0 ? 0.0 : std::pow(r2, 0.5 * m);
            }
        }
    } else {
        throw ConfigError(
            "empirical_moment: order not in the streaming set and outputs were "
            "not stored");
    }
    MomentEstimate est;
    est.count = batch.count;
    double total = 0.0;
    for (double s : chunk_sums) total += s;
    est.mean = total / static_cast<double>(batch.count);
    if (n_chunks >= 2) {
        double ss = 0.0;
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const double mc = chunk_sums[c] / static_cast<double>(batch.chunk_sizes[c]);
            const double w = static_cast<double>(batch.chunk_sizes[c]) /
                             static_cast<double>(batch.count);
            ss += w * w * (mc - est.mean) * (mc - est.mean);
        }
        est.std_error = std::sqrt(ss * n_chunks / (n_chunks - 1.0));
    } else {
        est.std_error = std::numeric_limits<double>::infinity();
    }
    return est;
}

struct Histogram {
    bool radial = true;
    int component = 0;
    std::vector<double> edges;        // bins + 1
    std::vector<std::uint64_t> counts;
    std::uint64_t out_of_range = 0;
    std::uint64_t excluded_zeros = 0;  // atom samples, never binned
    std::size_t total = 0;             // all samples, atom included
    // counts / (total * width): comparable to the continuous density part.
    std::vector<double> density;
};

inline Histogram make_histogram(const SampleBatch& batch, bool radial, int bins,
                                double lo, double hi, int component = 0) {
    if (bins <= 0 || !(hi > lo)) {
        throw ConfigError("make_histogram: need bins > 0 and hi > lo");
    }
    Histogram h;
    h.radial = radial;
    h.component = component;
    h.total = batch.count;
    h.counts.assign(bins, 0);
    h.edges.resize(bins + 1);
    const double w = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + b * w;

    if (batch.stored) {
        const int nd = batch.spec.out_width();
        if (!radial && (component < 0 || component >= nd)) {
            throw ConfigError("make_histogram: component index out of range");
        }
        for (std::size_t s = 0; s < batch.count; ++s) {
            if (batch.is_zero[s]) {
                ++h.excluded_zeros;
                continue;
            }
            double v;
            if (radial) {
                double r2 = 0.0;
                for (int i = 0; i < nd; ++i) {
                    const double x = batch.outputs[s * nd + i];
                    r2 += x * x;
                }
                v = std::sqrt(r2);
            } else {
                v = batch.outputs[s * nd + component];
            }
            const double pos = (v - lo) / w;
            if (pos >= 0.0 && pos < bins) {
                ++h.counts[static_cast<std::size_t>(pos)];
            } else {
                ++h.out_of_range;
            }
        }
    } else if (batch.has_planned_hist && batch.plan.radial == radial &&
               batch.plan.bins == bins && batch.plan.lo == lo &&
               batch.plan.hi == hi &&
               (radial || batch.plan.component == component)) {
        h.counts = batch.planned_counts;
        h.out_of_range = batch.planned_out_of_range;
        h.excluded_zeros = batch.zero_count;
    } else {
        throw ConfigError(
            "make_histogram: streaming batch has no matching planned histogram");
    }
    h.density.resize(bins);
    for (int b = 0; b < bins; ++b) {
        h.density[b] = static_cast<double>(h.counts[b]) /
                       (static_cast<double>(h.total) * w);
    }
    return h;
}

struct BinComparison {
    int bin = 0;
    std::uint64_t count = 0;
    double expected = 0.0;  // N * pi
    double z = 0.0;
};

struct CompareReport {
    double max_abs_z = 0.0;
    int bins_tested = 0;
    std::vector<BinComparison> bins;
};

// Z-scores of observed bin counts against exact bin probabilities pi_i
// (probability mass the model puts in bin i, atom excluded from bins by
// construction).  Bins with expected count below min_expected are skipped.
inline CompareReport compare_density(const Histogram& hist,
                                     const std::vector<double>& bin_probs,
                                     double min_expected = 1000.0) {
    if (bin_probs.size() != hist.counts.size()) {
        throw ConfigError("compare_density: bin count mismatch");
    }
    CompareReport rep;
    const double n = static_cast<double>(hist.total);
    for (std::size_t b = 0; b < bin_probs.size(); ++b) {
        const double pi = std::min(std::max(bin_probs[b], 0.0), 1.0);
        const double expect = n * pi;
        if (expect < min_expected) continue;
        const double sd = std::sqrt(n * pi * (1.0 - pi));
        BinComparison bc;
        bc.bin = static_cast<int>(b);
        bc.count = hist.counts[b];
        bc.expected = expect;
        bc.z = (static_cast<double>(hist.counts[b]) - expect) / sd;
        rep.bins.push_back(bc);
        rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(bc.z));
        ++rep.bins_tested;
    }
    return rep;
}

}  // namespace deepprior
