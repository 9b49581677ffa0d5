#include "citerank/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "citerank/error.hpp"

namespace citerank {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// P(X < x) for the continuous lognormal behind the integer counts.
double lognormal_cdf(const LognormalParams& p, double x) {
    if (x <= 0.0) return 0.0;
    return normal_cdf((std::log(x) - p.mu) / p.sigma);
}

} // namespace

LogBinSpec::LogBinSpec(int singletons, double offset, double step)
    : singletons_(singletons), offset_(offset), step_(step) {
    if (singletons < 1) throw DomainError("log-bin spec needs at least the {0} singleton bin");
    if (!(step > 0.0)) throw DomainError("log-bin step must be positive");
    if (boundary(0) != singletons) {
        throw DomainError("first geometric boundary round(10^offset) must equal the singleton count");
    }
    for (std::size_t k = 1; k < 64; ++k) {
        if (boundary(k) <= boundary(k - 1)) throw DomainError("log-bin boundaries are not strictly increasing");
    }
}

std::int64_t LogBinSpec::boundary(std::size_t k) const {
    return std::llround(std::pow(10.0, offset_ + step_ * static_cast<double>(k)));
}

std::size_t LogBinSpec::bin_of(CitationCount citations) const {
    if (citations < 0) throw DomainError("negative citation count");
    if (citations < singletons_) return static_cast<std::size_t>(citations);
    const double guess = std::floor((std::log10(static_cast<double>(citations)) - offset_) / step_);
    std::size_t k = guess > 0.0 ? static_cast<std::size_t>(guess) : 0;
    while (k > 0 && boundary(k) > citations) --k;
    while (boundary(k + 1) <= citations) ++k;
    return static_cast<std::size_t>(singletons_) + k;
}

std::pair<CitationCount, CitationCount> LogBinSpec::range(std::size_t index) const {
    const auto s = static_cast<std::size_t>(singletons_);
    if (index < s) return {static_cast<CitationCount>(index), static_cast<CitationCount>(index)};
    const auto k = index - s;
    return {boundary(k), boundary(k + 1) - 1};
}

std::string LogBinSpec::label(std::size_t index) const {
    const auto [lo, hi] = range(index);
    if (lo == hi) return std::to_string(lo);
    return std::to_string(lo) + "-" + std::to_string(hi);
}

std::optional<std::size_t> LogBinHistogram::find(std::string_view label) const {
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (bins[i].label == label) return i;
    }
    return std::nullopt;
}

LogBinHistogram log_binned_histogram(std::span<const CitationCount> citations, const LogBinSpec& spec) {
    if (citations.empty()) throw InsufficientDataError("histogram of an empty sample");
    LogBinHistogram hist{spec, {}, 0.0};
    std::vector<double> weights(static_cast<std::size_t>(spec.singletons()), 0.0);
    for (auto c : citations) {
        const auto bin = spec.bin_of(c);
        if (bin >= weights.size()) weights.resize(bin + 1, 0.0);
        weights[bin] += 1.0;
    }
    hist.bins.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const auto [lo, hi] = spec.range(i);
        hist.bins.push_back({spec.label(i), lo, hi, weights[i]});
    }
    hist.total = static_cast<double>(citations.size());
    return hist;
}

LogBinHistogram scale_to_reference(const LogBinHistogram& hist, const LogBinHistogram& reference,
                                   std::string_view anchor_bin) {
    if (!(hist.spec == reference.spec)) throw DomainError("histograms use different bin specs");
    const auto own = hist.find(anchor_bin);
    const auto ref = reference.find(anchor_bin);
    if (!own || !ref) throw LookupError("anchor bin '" + std::string(anchor_bin) + "' is not present");
    const double own_w = hist.bins[*own].weight;
    const double ref_w = reference.bins[*ref].weight;
    if (!(own_w > 0.0) || !(ref_w > 0.0)) {
        throw DomainError("cannot scale on anchor bin '" + std::string(anchor_bin) + "' with zero weight");
    }
    const double factor = ref_w / own_w;
    LogBinHistogram out = hist;
    out.total = 0.0;
    for (auto& b : out.bins) {
        b.weight *= factor;
        out.total += b.weight;
    }
    out.bins[*own].weight = ref_w;
    return out;
}

std::vector<CitationCount> synth_lognormal(std::size_t n, const LognormalParams& params, std::uint64_t seed) {
    if (n == 0) throw DomainError("synthetic sample size must be at least 1");
    if (!(params.sigma > 0.0)) throw DomainError("lognormal sigma must be positive");
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    // keeps llround in range for absurd parameters
    constexpr double kCap = 1e15;
    std::vector<CitationCount> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::exp(params.mu + params.sigma * normal(engine));
        out.push_back(std::llround(std::min(x, kCap)));
    }
    return out;
}

LognormalParams estimate_lognormal(std::span<const double> values) {
    LognormalParams p;
    double mean = 0.0;
    double m2 = 0.0;
    for (double v : values) {
        if (!(v >= 1.0)) {
            ++p.excluded_zeros;
            continue;
        }
        ++p.n;
        const double x = std::log(v);
        const double delta = x - mean;
        mean += delta / static_cast<double>(p.n);
        m2 += delta * (x - mean);
    }
    if (p.n < 10) {
        throw InsufficientDataError("lognormal fit needs at least 10 values >= 1, got " + std::to_string(p.n));
    }
    p.mu = mean;
    p.sigma = std::sqrt(m2 / static_cast<double>(p.n - 1));
    if (!(p.sigma > 0.0)) throw InsufficientDataError("lognormal fit: zero variance in ln(citations)");
    return p;
}

LognormalParams estimate_lognormal(std::span<const CitationCount> citations) {
    std::vector<double> values(citations.begin(), citations.end());
    return estimate_lognormal(values);
}

double lognormal_bin_probability(const LognormalParams& params, CitationCount lower, CitationCount upper) {
    if (lower > upper) return 0.0;
    const double lo = lower <= 0 ? 0.0 : lognormal_cdf(params, static_cast<double>(lower) - 0.5);
    return lognormal_cdf(params, static_cast<double>(upper) + 0.5) - lo;
}

LowerTailExcess lower_tail_excess(const LogBinHistogram& observed, const LognormalParams& model) {
    if (observed.bins.empty() || !(observed.total > 0.0)) throw InsufficientDataError("empty observed histogram");
    if (!(model.sigma > 0.0)) throw DomainError("lognormal sigma must be positive");

    const auto& spec = observed.spec;
    // model bins far enough to the right to contain its mode
    const double far_right = std::min(std::exp(model.mu + 5.0 * model.sigma), 1e15);
    const auto span = std::max(observed.bins.size(), spec.bin_of(static_cast<CitationCount>(far_right)) + 1);
    std::vector<double> prob(span);
    for (std::size_t i = 0; i < span; ++i) {
        const auto [lo, hi] = spec.range(i);
        prob[i] = lognormal_bin_probability(model, lo, hi);
    }

    LowerTailExcess out;
    out.mode_bin = static_cast<std::size_t>(std::max_element(prob.begin(), prob.end()) - prob.begin());
    if (out.mode_bin == 0) {
        out.mode_undefined = true;
        out.mode_bin = static_cast<std::size_t>(spec.singletons());
    }

    double observed_right = 0.0;
    for (std::size_t i = out.mode_bin + 1; i < observed.bins.size(); ++i) observed_right += observed.bins[i].weight;
    const double model_right = 1.0 - lognormal_cdf(model, static_cast<double>(spec.range(out.mode_bin).second) + 0.5);
    if (!(observed_right > 0.0) || !(model_right > 0.0)) {
        throw InsufficientDataError("no observed or model mass right of the mode to normalize against");
    }
    const double scale = observed_right / model_right;

    out.expected.resize(observed.bins.size());
    for (std::size_t i = 0; i < observed.bins.size(); ++i) out.expected[i] = scale * prob[i];
    const auto left = std::min(out.mode_bin + 1, observed.bins.size());
    out.excess.resize(left);
    for (std::size_t i = 0; i < left; ++i) {
        out.excess[i] = observed.bins[i].weight - out.expected[i];
        out.total_excess += out.excess[i];
    }
    out.excess_fraction = out.total_excess / observed.total;
    return out;
}

double bottom50_share(const PercentileSet& set) {
    if (set.papers == 0) throw DomainError("bottom-50% share of an empty group");
    return 1.0 - set.top.top50 / static_cast<double>(set.papers);
}

} // namespace citerank
