#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "deepprior/linear_prior.hpp"
#include "deepprior/mc_oracle.hpp"
#include "deepprior/network_spec.hpp"
#include "deepprior/relu_prior.hpp"

using namespace deepprior;
using Catch::Approx;

namespace {

NetworkSpec spec_of(std::vector<int> widths, Activation act, double kappa = 1.0) {
    return make_spec(std::move(widths), act, KappaMode::explicit_kappa, kappa);
}

// Standard normal bin probability via erf.
double normal_bin_prob(double a, double b) {
    const double s = 1.0 / std::sqrt(2.0);
    return 0.5 * (std::erf(b * s) - std::erf(a * s));
}

}  // namespace

TEST_CASE("sampling is byte-identical across worker counts", "[mc]") {
    const auto spec = spec_of({3, 2}, Activation::relu);
    McConfig one, four;
    one.workers = 1;
    four.workers = 4;
    const auto a = sample_outputs(spec, 42, 200000, one);
    const auto b = sample_outputs(spec, 42, 200000, four);
    REQUIRE(a.stored);
    CHECK(a.outputs == b.outputs);
    CHECK(a.zero_count == b.zero_count);
    CHECK(a.chunk_power_sums == b.chunk_power_sums);
    // A different seed must actually change the stream.
    const auto c = sample_outputs(spec, 43, 200000, one);
    CHECK(a.outputs != c.outputs);
}

TEST_CASE("linear networks never emit exact zeros; tiny ReLU nets often do",
          "[mc]") {
    const auto lin = sample_outputs(spec_of({2, 2}, Activation::linear), 7, 100000);
    CHECK(lin.zero_count == 0);
    // widths (1,1): atom mass is exactly 1/2.
    const auto tiny = sample_outputs(spec_of({1, 1}, Activation::relu), 7, 200000);
    const double f = static_cast<double>(tiny.zero_count) / 200000.0;
    const double sd = std::sqrt(0.5 * 0.5 / 200000.0);
    CHECK(std::fabs(f - 0.5) < 4.0 * sd);
}

TEST_CASE("empirical moments straddle the exact ones", "[mc]") {
    const auto spec = spec_of({3, 2}, Activation::linear, 0.9);
    const auto batch = sample_outputs(spec, 11, 400000);
    const auto est = empirical_moment(batch, 2.0);
    const double exact = moment_norm_linear(spec, 2.0);
    CHECK(est.std_error > 0.0);
    CHECK(std::fabs(est.mean - exact) < 5.0 * est.std_error);
    // Zeroth moment is exact by definition.
    const auto m0 = empirical_moment(batch, 0.0);
    CHECK(m0.mean == 1.0);
    CHECK(m0.std_error == 0.0);
    // ReLU fourth moment against the closed ladder.
    const auto rspec = spec_of({3, 2}, Activation::relu, 0.9);
    const auto rbatch = sample_outputs(rspec, 11, 400000);
    const auto r4 = empirical_moment(rbatch, 4.0);
    CHECK(std::fabs(r4.mean - moment_norm_relu(rspec, 4.0)) < 5.0 * r4.std_error);
}

TEST_CASE("component signs are symmetric", "[mc]") {
    const auto batch = sample_outputs(spec_of({2, 3, 2}, Activation::relu), 99, 200000);
    REQUIRE(batch.stored);
    const int nd = batch.spec.out_width();
    for (int i = 0; i < nd; ++i) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t k = 0; k < batch.count; ++k) {
            const double v = batch.outputs[k * nd + i];
            s += v;
            s2 += v * v;
        }
        const double mean = s / batch.count;
        const double se = std::sqrt(s2 / batch.count) / std::sqrt(batch.count);
        CAPTURE(i);
        CHECK(std::fabs(mean) < 5.0 * se);
    }
}

TEST_CASE("histograms account for every sample", "[mc]") {
    const auto spec = spec_of({1, 1}, Activation::relu);
    const auto batch = sample_outputs(spec, 5, 150000);
    const auto hist = make_histogram(batch, true, 40, 0.0, 3.0);
    std::uint64_t binned = 0;
    for (auto c : hist.counts) binned += c;
    CHECK(binned + hist.out_of_range + hist.excluded_zeros == batch.count);
    CHECK(hist.excluded_zeros == batch.zero_count);
    // density * width sums to the in-range continuous fraction.
    double mass = 0.0;
    const double w = hist.edges[1] - hist.edges[0];
    for (double d : hist.density) mass += d * w;
    CHECK(mass == Approx(static_cast<double>(binned) / batch.count).epsilon(1e-12));
}

TEST_CASE("z-scores accept the true density and reject a biased one", "[mc]") {
    // Depth 1, width 1, kappa 1: output is exactly standard normal.
    const auto spec = spec_of({1}, Activation::linear);
    const auto batch = sample_outputs(spec, 123, 400000);
    const int bins = 40;
    const auto hist = make_histogram(batch, false, bins, -3.0, 3.0, 0);
    std::vector<double> probs(bins);
    for (int b = 0; b < bins; ++b) {
        probs[b] = normal_bin_prob(hist.edges[b], hist.edges[b + 1]);
    }
    const auto ok = compare_density(hist, probs, 1000.0);
    CHECK(ok.bins_tested > 20);
    CHECK(ok.max_abs_z < 5.0);
    // Inflate the model by 10%: the comparison must notice.
    std::vector<double> biased = probs;
    for (auto& p : biased) p *= 1.1;
    const auto bad = compare_density(hist, biased, 1000.0);
    CHECK(bad.max_abs_z > 5.0);
}

TEST_CASE("streaming mode reproduces stored-mode summaries", "[mc]") {
    const auto spec = spec_of({2, 1}, Activation::relu);
    HistogramPlan plan;
    plan.radial = true;
    plan.bins = 25;
    plan.lo = 0.0;
    plan.hi = 4.0;
    McConfig stream_cfg;
    stream_cfg.max_store_doubles = 1000;  // force streaming
    const auto streamed = sample_outputs(spec, 77, 120000, stream_cfg, &plan);
    CHECK(!streamed.stored);
    const auto stored = sample_outputs(spec, 77, 120000, {}, &plan);
    REQUIRE(stored.stored);
    CHECK(streamed.zero_count == stored.zero_count);
    const auto hs = make_histogram(streamed, true, 25, 0.0, 4.0);
    const auto hd = make_histogram(stored, true, 25, 0.0, 4.0);
    CHECK(hs.counts == hd.counts);
    CHECK(empirical_moment(streamed, 4.0).mean ==
          Approx(empirical_moment(stored, 4.0).mean).epsilon(1e-14));
    // Orders outside the streaming set need stored outputs.
    CHECK_THROWS_AS(empirical_moment(streamed, 3.0), ConfigError);
    CHECK(std::isfinite(empirical_moment(stored, 3.0).mean));
}

TEST_CASE("sampler rejects bad configuration", "[mc]") {
    const auto spec = spec_of({2, 1}, Activation::linear);
    CHECK_THROWS_AS(sample_outputs(spec, 1, 0), ConfigError);
    McConfig cfg;
    cfg.chunk_size = 0;
    CHECK_THROWS_AS(sample_outputs(spec, 1, 10, cfg), ConfigError);
    const auto batch = sample_outputs(spec, 1, 1000);
    CHECK_THROWS_AS(make_histogram(batch, true, 0, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_histogram(batch, false, 10, 0.0, 1.0, 5), ConfigError);
}
