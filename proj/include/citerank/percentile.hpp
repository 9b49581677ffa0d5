#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citerank/corpus.hpp"

namespace citerank {

/// Boundary of the global top-x% set under fractional tie counting.
///
/// Papers cited more than `c_star` count fully; each of the `tied` papers
/// cited exactly `c_star` counts `tie_fraction`, so that
/// `full_weight_above + tie_fraction * tied == level / 100 * G`.
/// The threshold is chosen with `tie_fraction` in (0, 1].
struct PercentileThreshold {
    double level = 0.0; // percent
    CitationCount c_star = 0;
    std::size_t full_weight_above = 0;
    std::size_t tied = 0;
    double tie_fraction = 0.0;

    /// Weight of a single paper with the given citation count.
    double weight(CitationCount citations) const noexcept {
        if (citations > c_star) return 1.0;
        return citations == c_star ? tie_fraction : 0.0;
    }
};

/// How papers at the threshold citation count are credited.
enum class TieCounting {
    fractional, // share of the boundary mass (default)
    strict,     // every paper at c_star counts fully; sensitivity checks only
};

/// Throws DomainError unless 0 < level < 100.
PercentileThreshold percentile_threshold(const RankedCorpus& corpus, double level);

/// Group papers inside the global top `level`%. `group` may be GLOBAL.
double top_percentile_count(const RankedCorpus& corpus, std::string_view group, double level,
                            TieCounting counting = TieCounting::fractional);

/// Same, against a precomputed threshold.
double top_percentile_count(const RankedCorpus& corpus, std::string_view group, const PercentileThreshold& threshold,
                            TieCounting counting = TieCounting::fractional);

/// P_top{50,10,5,1}% counts of one group.
struct TopCounts {
    double top50 = 0.0;
    double top10 = 0.0;
    double top5 = 0.0;
    double top1 = 0.0;
};

/// Ratios that coincide under the ideal double-rank model:
/// R1 = P_top10/P, R2 = P_top5/P_top50, R3 = P_top1/P_top10.
/// A ratio is empty when not calculable.
struct RatioTriple {
    std::optional<double> r1;
    std::optional<double> r2;
    std::optional<double> r3;

    bool complete() const noexcept { return r1 && r2 && r3; }
};

/// Computes the triple. R3 is withheld when P_top1% falls below
/// `min_top1_for_r3`, mirroring the "N/C" entries of published tables.
RatioTriple ratios_from_counts(double papers, const TopCounts& top, double min_top1_for_r3 = 1.0);

enum IndicatorFlag : unsigned {
    kNoFlags = 0,
    kR1NotCalculable = 1u << 0,
    kR2NotCalculable = 1u << 1,
    kR3NotCalculable = 1u << 2,
};

struct PercentileSet {
    std::string group;
    std::size_t papers = 0; // P
    TopCounts top;
    RatioTriple ratios;
    unsigned flags = kNoFlags;
};

struct IndicatorOptions {
    TieCounting counting = TieCounting::fractional;
    double min_top1_for_r3 = 1.0;
};

/// Indicators of one group. Throws LookupError for unknown groups.
PercentileSet indicator_set(const RankedCorpus& corpus, std::string_view group, const IndicatorOptions& options = {});

/// Semicolon-separated flag names, empty when no flag is set.
std::string describe_flags(unsigned flags);

} // namespace citerank
