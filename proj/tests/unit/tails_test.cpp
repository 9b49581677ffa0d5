#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "citerank/error.hpp"
#include "citerank/tails.hpp"

using namespace citerank;

namespace {

LogBinHistogram hist_of(const std::vector<CitationCount>& c) { return log_binned_histogram(c); }

double weight(const LogBinHistogram& h, std::string_view label) {
    const auto i = h.find(label);
    return i ? h.bins[*i].weight : 0.0;
}

} // namespace

TEST(LogBinSpec, DefaultBoundaries) {
    const LogBinSpec spec;
    const std::int64_t expected[] = {3, 5, 8, 13, 20, 32, 50, 79, 126, 200};
    for (std::size_t k = 0; k < std::size(expected); ++k) {
        // oracle: direct evaluation of round(10^(0.5 + 0.2k))
        EXPECT_EQ(spec.boundary(k), std::llround(std::pow(10.0, 0.5 + 0.2 * static_cast<double>(k))));
        EXPECT_EQ(spec.boundary(k), expected[k]);
    }
    const char* labels[] = {"0", "1", "2", "3-4", "5-7", "8-12", "13-19", "20-31", "32-49", "50-78"};
    for (std::size_t i = 0; i < std::size(labels); ++i) EXPECT_EQ(spec.label(i), labels[i]);
}

TEST(LogBinSpec, InvalidSpecs) {
    EXPECT_THROW(LogBinSpec(2, 0.5, 0.2), DomainError);
    EXPECT_THROW(LogBinSpec(3, 0.5, 0.0), DomainError);
    EXPECT_THROW(LogBinSpec(3, 0.5, 0.01), DomainError); // repeated boundaries
    EXPECT_NO_THROW(LogBinSpec(1, 0.0, 0.25));
}

TEST(LogBinnedHistogram, AllZeros) {
    const auto h = hist_of(std::vector<CitationCount>(50, 0));
    EXPECT_EQ(h.bins[0].weight, 50.0);
    for (std::size_t i = 1; i < h.bins.size(); ++i) EXPECT_EQ(h.bins[i].weight, 0.0);
    EXPECT_EQ(h.total, 50.0);
}

TEST(LogBinnedHistogram, DirectPlacement) {
    const auto h = hist_of({3, 4, 5, 49, 50});
    EXPECT_EQ(weight(h, "3-4"), 2.0);
    EXPECT_EQ(weight(h, "5-7"), 1.0);
    EXPECT_EQ(weight(h, "32-49"), 1.0);
    EXPECT_EQ(weight(h, "50-78"), 1.0);
    EXPECT_EQ(weight(h, "8-12"), 0.0);
    EXPECT_EQ(h.bins.back().label, "50-78");
}

TEST(LogBinnedHistogram, Errors) {
    EXPECT_THROW(hist_of({3, -1}), DomainError);
    EXPECT_THROW(hist_of({}), InsufficientDataError);
}

TEST(ScaleToReference, IdentityAndFactor) {
    std::vector<CitationCount> ref(40, 35), own(10, 40);
    own.push_back(1);
    own.push_back(1);
    const auto r = hist_of(ref);
    const auto h = hist_of(own);
    const auto same = scale_to_reference(r, r, "32-49");
    for (std::size_t i = 0; i < r.bins.size(); ++i) EXPECT_EQ(same.bins[i].weight, r.bins[i].weight);

    const auto scaled = scale_to_reference(h, r, "32-49");
    EXPECT_NEAR(weight(scaled, "32-49"), 40.0, 1e-9);
    EXPECT_NEAR(weight(scaled, "1"), 8.0, 1e-12);
    EXPECT_NEAR(scaled.total, 48.0, 1e-9);
}

TEST(ScaleToReference, Errors) {
    const auto r = hist_of({35, 35, 2});
    const auto h = hist_of({1, 2, 60});
    EXPECT_THROW(scale_to_reference(h, r, "32-49"), DomainError);
    EXPECT_THROW(scale_to_reference(h, r, "100-125"), LookupError);
    auto other = hist_of({35});
    other.spec = LogBinSpec(1, 0.0, 0.25);
    EXPECT_THROW(scale_to_reference(other, r, "32-49"), DomainError);
}

TEST(SynthLognormal, DegenerateSigma) {
    const auto draws = synth_lognormal(1000, {std::log(20.0), 1e-9}, 5);
    for (auto c : draws) ASSERT_EQ(c, 20);
}

TEST(SynthLognormal, SameSeedSameSequence) {
    const LognormalParams p{2.0, 1.1};
    EXPECT_EQ(synth_lognormal(5000, p, 99), synth_lognormal(5000, p, 99));
    EXPECT_NE(synth_lognormal(5000, p, 99), synth_lognormal(5000, p, 100));
}

TEST(SynthLognormal, Preconditions) {
    EXPECT_THROW(synth_lognormal(0, {1.0, 1.0}, 1), DomainError);
    EXPECT_THROW(synth_lognormal(10, {1.0, 0.0}, 1), DomainError);
}

TEST(EstimateLognormal, RoundTripAgainstContinuousOracle) {
    const LognormalParams truth{2.0, 1.1};
    const std::size_t n = 100000;
    const std::uint64_t seed = 17;
    const auto fit = estimate_lognormal(std::span<const CitationCount>(synth_lognormal(n, truth, seed)));

    // the same normal stream, unrounded, restricted to draws that round to >= 1
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double sum = 0.0, sum2 = 0.0, kept = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = truth.mu + truth.sigma * normal(engine);
        if (std::exp(x) < 0.5) continue;
        sum += x;
        sum2 += x * x;
        kept += 1.0;
    }
    const double cont_mu = sum / kept;
    const double cont_sigma = std::sqrt((sum2 - kept * cont_mu * cont_mu) / (kept - 1.0));

    EXPECT_EQ(static_cast<double>(fit.n), kept);
    EXPECT_NEAR(fit.mu, truth.mu, 0.05);
    EXPECT_NEAR(fit.sigma, truth.sigma, 0.05);
    // rounding bias alone
    EXPECT_NEAR(fit.mu, cont_mu, 0.02);
    EXPECT_NEAR(fit.sigma, cont_sigma, 0.05);
}

TEST(EstimateLognormal, DegenerateAndSmallSamples) {
    const std::vector<double> flat(20, std::exp(2.0));
    EXPECT_THROW(estimate_lognormal(flat), InsufficientDataError);
    const std::vector<CitationCount> few{1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 0};
    EXPECT_THROW(estimate_lognormal(std::span<const CitationCount>(few)), InsufficientDataError);
}

TEST(EstimateLognormal, ZerosExcludedAndCounted) {
    std::vector<CitationCount> c{0, 0, 0};
    for (int i = 1; i <= 12; ++i) c.push_back(i);
    const auto p = estimate_lognormal(std::span<const CitationCount>(c));
    EXPECT_EQ(p.n, 12u);
    EXPECT_EQ(p.excluded_zeros, 3u);
    double mean = 0.0;
    for (int i = 1; i <= 12; ++i) mean += std::log(i) / 12.0;
    EXPECT_NEAR(p.mu, mean, 1e-12);
}

TEST(LognormalBinProbability, PartitionsUnity) {
    const LognormalParams p{2.0, 1.1};
    const LogBinSpec spec;
    double total = 0.0;
    for (std::size_t i = 0; i < 40; ++i) {
        const auto [lo, hi] = spec.range(i);
        total += lognormal_bin_probability(p, lo, hi);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(LowerTailExcess, ModelSampleHasNoExcess) {
    const LognormalParams model{2.0, 1.1};
    const auto h = log_binned_histogram(synth_lognormal(100000, model, 3));
    const auto e = lower_tail_excess(h, model);
    EXPECT_FALSE(e.mode_undefined);
    EXPECT_NEAR(e.excess_fraction, 0.0, 0.02);
}

TEST(LowerTailExcess, InjectedLowMassIsRecovered) {
    const LognormalParams model{2.0, 1.1};
    auto sample = synth_lognormal(100000, model, 3);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> low(0, 2);
    for (int i = 0; i < 30000; ++i) sample.push_back(low(rng));
    const auto e = lower_tail_excess(log_binned_histogram(sample), model);
    EXPECT_NEAR(e.excess_fraction, 0.3 / 1.3, 0.02);
    EXPECT_NEAR(e.total_excess, 30000.0, 0.02 * 130000.0);
}

TEST(LowerTailExcess, EmptyLeftRegionGivesZero) {
    // a narrow model at 7: nothing below the 5-7 bin
    const LognormalParams model{std::log(7.0), 0.05};
    const LogBinSpec spec;
    LogBinHistogram h{spec, {}, 0.0};
    for (std::size_t i = 0; i < 7; ++i) {
        const auto [lo, hi] = spec.range(i);
        h.bins.push_back({spec.label(i), lo, hi, 1000.0 * lognormal_bin_probability(model, lo, hi)});
        h.total += h.bins.back().weight;
    }
    const auto e = lower_tail_excess(h, model);
    EXPECT_EQ(h.bins[e.mode_bin].label, "5-7");
    for (double x : e.excess) EXPECT_NEAR(x, 0.0, 1e-9);
    EXPECT_NEAR(e.total_excess, 0.0, 1e-9);
}

TEST(LowerTailExcess, MonotoneModelFlagsUndefinedMode) {
    const LognormalParams model{-1.0, 1.0};
    const auto h = log_binned_histogram(std::vector<CitationCount>{0, 0, 1, 2, 3, 4, 5, 9});
    const auto e = lower_tail_excess(h, model);
    EXPECT_TRUE(e.mode_undefined);
    EXPECT_EQ(e.mode_bin, 3u);
    EXPECT_EQ(e.excess.size(), 4u);
}

TEST(Bottom50Share, Definition) {
    PercentileSet set;
    set.papers = 1000;
    set.top.top50 = 571.0;
    EXPECT_NEAR(bottom50_share(set), 0.429, 1e-12);
    set.top.top50 = 500.0;
    EXPECT_EQ(bottom50_share(set), 0.5);
    set.papers = 0;
    EXPECT_THROW(bottom50_share(set), DomainError);
}
