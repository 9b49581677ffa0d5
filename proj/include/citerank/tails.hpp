#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citerank/corpus.hpp"
#include "citerank/percentile.hpp"

namespace citerank {

/// Logarithmic binning with singleton bins for the lowest counts.
///
/// Counts 0 .. singletons-1 get one bin each. Geometric boundaries are
/// b_k = round(10^(offset + step * k)) and bin k covers [b_k, b_{k+1} - 1].
/// The defaults give {0}, {1}, {2}, 3-4, 5-7, 8-12, 13-19, 20-31, 32-49, ...
/// (five bins per decade).
class LogBinSpec {
public:
    LogBinSpec() : LogBinSpec(3, 0.5, 0.2) {}

    /// Throws DomainError unless round(10^offset) == singletons and the
    /// boundaries are strictly increasing over the first decades.
    LogBinSpec(int singletons, double offset, double step);

    int singletons() const noexcept { return singletons_; }
    double offset() const noexcept { return offset_; }
    double step() const noexcept { return step_; }

    /// Lower boundary of geometric bin k.
    std::int64_t boundary(std::size_t k) const;

    /// Index of the bin holding `citations` (singletons first).
    std::size_t bin_of(CitationCount citations) const;

    /// Inclusive range of bin `index`.
    std::pair<CitationCount, CitationCount> range(std::size_t index) const;

    /// "0", "1", "2", "3-4", ...
    std::string label(std::size_t index) const;

    bool operator==(const LogBinSpec&) const = default;

private:
    int singletons_;
    double offset_;
    double step_;
};

struct HistogramBin {
    std::string label;
    CitationCount lower = 0;
    CitationCount upper = 0;
    double weight = 0.0;
};

/// Bins run from {0} through the bin holding the largest observed count.
struct LogBinHistogram {
    LogBinSpec spec;
    std::vector<HistogramBin> bins;
    double total = 0.0;

    /// Index of the bin with the given label, or nullopt.
    std::optional<std::size_t> find(std::string_view label) const;
};

/// Throws DomainError for negative counts and InsufficientDataError for
/// an empty sample.
LogBinHistogram log_binned_histogram(std::span<const CitationCount> citations, const LogBinSpec& spec = {});

/// Multiplies every weight so that the anchor bin matches the reference.
/// Throws DomainError when the specs differ or either anchor weight is zero.
LogBinHistogram scale_to_reference(const LogBinHistogram& hist, const LogBinHistogram& reference,
                                   std::string_view anchor_bin);

/// Parameters of ln(citations) ~ N(mu, sigma^2).
struct LognormalParams {
    double mu = 0.0;
    double sigma = 1.0;
    std::size_t n = 0;              // values used in the fit
    std::size_t excluded_zeros = 0; // zeros dropped before fitting
};

/// n draws of exp(mu + sigma Z), rounded to the nearest integer, from a
/// generator seeded with `seed`. Same seed, same sequence.
std::vector<CitationCount> synth_lognormal(std::size_t n, const LognormalParams& params, std::uint64_t seed);

/// Sample mean and standard deviation (n - 1) of ln(c) over c >= 1.
/// Requires at least ten positive values and non-zero spread.
LognormalParams estimate_lognormal(std::span<const double> values);
LognormalParams estimate_lognormal(std::span<const CitationCount> citations);

/// Expected share of integer counts falling in [lower, upper] when counts
/// are lognormal draws rounded to the nearest integer.
double lognormal_bin_probability(const LognormalParams& params, CitationCount lower, CitationCount upper);

/// Observed minus model weight for the bins at and left of the model mode.
struct LowerTailExcess {
    std::size_t mode_bin = 0;
    bool mode_undefined = false; // model histogram monotone; first geometric bin used
    std::vector<double> expected; // model weight for every observed bin
    std::vector<double> excess;   // observed - expected, bins 0..mode_bin
    double total_excess = 0.0;
    double excess_fraction = 0.0; // total_excess / observed total
};

/// The model is normalized on the bins right of the mode, so lower-tail
/// mass added to the observation does not leak into the baseline.
LowerTailExcess lower_tail_excess(const LogBinHistogram& observed, const LognormalParams& model);

/// Share of a group's papers in the global bottom 50%: 1 - P_top50/P.
double bottom50_share(const PercentileSet& set);

} // namespace citerank
