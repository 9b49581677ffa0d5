#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "citerank/corpus.hpp"
#include "citerank/percentile.hpp"

namespace citerank {

struct DoubleRankPoint {
    double global_rank = 0.0; // g
    double local_rank = 0.0;  // l = 1..P
};

/// Global versus local ranks of one group's papers, most cited first.
/// Local ranks are 1..P; global ranks follow the corpus rank policy, so
/// group papers sharing a citation count share a global rank.
struct DoubleRankSeries {
    std::string group;
    std::vector<DoubleRankPoint> points;
};

/// Throws InsufficientDataError when the group has fewer than two papers.
DoubleRankSeries double_rank_series(const RankedCorpus& corpus, std::string_view group);

struct Anchor {
    double fraction = 0.0; // of the global list, e.g. 0.1 for the top 10%
    double count = 0.0;    // group papers inside that fraction
};

/// Reference curve l(g) = coeff * g^alpha through two percentile anchors.
struct PowerLawReference {
    double alpha = 0.0;
    double coeff = 0.0;
    Anchor anchor_hi; // larger fraction
    Anchor anchor_lo;
    double global_size = 0.0;
};

/// Fits the curve through both anchors exactly:
///   alpha = ln(count_hi / count_lo) / ln(x_hi / x_lo),
///   coeff = count_hi / (x_hi * G)^alpha.
PowerLawReference power_law_reference(const Anchor& hi, const Anchor& lo, double global_size);

/// coeff * g^alpha for 1 <= g <= G.
double expected_local_rank(const PowerLawReference& ref, double global_rank);

/// Inverse of the curve: the global rank at which local rank `l` is expected.
double expected_global_rank(const PowerLawReference& ref, double local_rank);

/// Which percentile counts pin the reference.
enum class AnchorPair {
    all_and_top10,   // (1, P) and (0.1, P_top10%)
    top10_and_top1,  // (0.1, P_top10%) and (0.01, P_top1%)
};

AnchorPair parse_anchor_pair(std::string_view text); // "P:top10" or "top10:top1"
std::string_view to_string(AnchorPair pair);

/// Reference from a group's measured indicators.
PowerLawReference reference_from_indicators(const PercentileSet& set, AnchorPair pair, double global_size);

/// Signed relative departures from ratio equality.
struct RatioGap {
    double gap_12 = 0.0; // (R1 - R2) / R1
    double gap_13 = 0.0; // (R1 - R3) / R1
};

/// Throws InsufficientDataError when any ratio is not calculable.
RatioGap ratio_equality_gap(const RatioTriple& ratios);

enum class Verdict { conforming, undervalued, overvalued };
std::string_view to_string(Verdict verdict);

/// Upper-tail comparison of actual and reference global ranks.
///
/// For every point with g <= window * G the residual is
/// ln(g_actual) - ln(g_reference(l)). Negative means the group's papers
/// sit higher in the global list than the reference predicts, i.e.
/// percentile indicators undervalue the group.
struct DeviationReport {
    std::string group;
    double window = 0.0;
    std::size_t points = 0;
    double mean_log_residual = 0.0;
    double max_abs_log_residual = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::conforming;
};

inline constexpr double kDefaultDeviationWindow = 0.02;
inline constexpr double kDefaultDeviationTolerance = 0.10;

/// Requires 0 < window <= anchor_lo.fraction and at least three points
/// inside the window.
DeviationReport upper_tail_deviation(const DoubleRankSeries& series, const PowerLawReference& ref,
                                     double window = kDefaultDeviationWindow,
                                     double tolerance = kDefaultDeviationTolerance);

/// Expected group papers in the global top `fraction`, extrapolated below
/// the fitted range (0 < fraction < anchor_lo.fraction). May be below one.
double extrapolate_breakthrough(const PowerLawReference& ref, double fraction);

} // namespace citerank
