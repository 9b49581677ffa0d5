#include "citerank/doublerank.hpp"

#include <algorithm>
#include <cmath>

#include "citerank/error.hpp"

namespace citerank {

DoubleRankSeries double_rank_series(const RankedCorpus& corpus, std::string_view group) {
    const auto positions = corpus.group(group);
    if (positions.size() < 2) {
        throw InsufficientDataError("double-rank series of '" + std::string(group) + "' needs at least 2 papers");
    }
    DoubleRankSeries series;
    series.group = std::string(group);
    series.points.reserve(positions.size());
    double local = 0.0;
    for (auto pos : positions) series.points.push_back({corpus.rank(pos), ++local});
    return series;
}

PowerLawReference power_law_reference(const Anchor& hi, const Anchor& lo, double global_size) {
    if (!(hi.count > 0.0) || !(lo.count > 0.0)) throw DomainError("anchor counts must be positive");
    if (!(global_size > 0.0)) throw DomainError("global size must be positive");
    if (hi.fraction == lo.fraction) throw DomainError("degenerate anchors: both at the same fraction");
    if (!(lo.fraction > 0.0 && lo.fraction < hi.fraction && hi.fraction <= 1.0)) {
        throw DomainError("anchor fractions must satisfy 0 < x_lo < x_hi <= 1");
    }
    if (!(lo.count < hi.count)) throw DomainError("anchor counts must decrease with the fraction");

    PowerLawReference ref;
    ref.anchor_hi = hi;
    ref.anchor_lo = lo;
    ref.global_size = global_size;
    ref.alpha = std::log(hi.count / lo.count) / std::log(hi.fraction / lo.fraction);
    ref.coeff = hi.count / std::pow(hi.fraction * global_size, ref.alpha);
    return ref;
}

double expected_local_rank(const PowerLawReference& ref, double global_rank) {
    if (!(global_rank >= 1.0 && global_rank <= ref.global_size)) {
        throw DomainError("global rank out of range [1, G]");
    }
    // anchored form keeps full precision when coeff underflows toward tiny values
    const double g_hi = ref.anchor_hi.fraction * ref.global_size;
    return ref.anchor_hi.count * std::pow(global_rank / g_hi, ref.alpha);
}

double expected_global_rank(const PowerLawReference& ref, double local_rank) {
    if (!(local_rank > 0.0)) throw DomainError("local rank must be positive");
    const double g_hi = ref.anchor_hi.fraction * ref.global_size;
    return g_hi * std::pow(local_rank / ref.anchor_hi.count, 1.0 / ref.alpha);
}

AnchorPair parse_anchor_pair(std::string_view text) {
    if (text == "P:top10") return AnchorPair::all_and_top10;
    if (text == "top10:top1") return AnchorPair::top10_and_top1;
    throw DomainError("unknown anchor pair '" + std::string(text) + "' (expected P:top10 or top10:top1)");
}

std::string_view to_string(AnchorPair pair) {
    return pair == AnchorPair::all_and_top10 ? "P:top10" : "top10:top1";
}

PowerLawReference reference_from_indicators(const PercentileSet& set, AnchorPair pair, double global_size) {
    if (pair == AnchorPair::all_and_top10) {
        return power_law_reference({1.0, static_cast<double>(set.papers)}, {0.1, set.top.top10}, global_size);
    }
    return power_law_reference({0.1, set.top.top10}, {0.01, set.top.top1}, global_size);
}

RatioGap ratio_equality_gap(const RatioTriple& ratios) {
    if (!ratios.complete()) throw InsufficientDataError("ratio gap needs R1, R2 and R3");
    const double r1 = *ratios.r1;
    if (r1 == 0.0) throw InsufficientDataError("ratio gap undefined for R1 = 0");
    return {(r1 - *ratios.r2) / r1, (r1 - *ratios.r3) / r1};
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::conforming:
        return "conforming";
    case Verdict::undervalued:
        return "undervalued";
    case Verdict::overvalued:
        return "overvalued";
    }
    return "unknown";
}

DeviationReport upper_tail_deviation(const DoubleRankSeries& series, const PowerLawReference& ref, double window,
                                     double tolerance) {
    if (!(window > 0.0 && window <= ref.anchor_lo.fraction)) {
        throw DomainError("deviation window must lie in (0, " + std::to_string(ref.anchor_lo.fraction) + "]");
    }
    if (!(tolerance >= 0.0)) throw DomainError("deviation tolerance must be non-negative");

    const double limit = window * ref.global_size;
    DeviationReport report;
    report.group = series.group;
    report.window = window;
    report.tolerance = tolerance;
    double sum = 0.0;
    for (const auto& p : series.points) {
        if (p.global_rank > limit) continue;
        const double r = std::log(p.global_rank) - std::log(expected_global_rank(ref, p.local_rank));
        sum += r;
        report.max_abs_log_residual = std::max(report.max_abs_log_residual, std::abs(r));
        ++report.points;
    }
    if (report.points < 3) {
        throw InsufficientDataError("only " + std::to_string(report.points) + " points inside the top " +
                                    std::to_string(window * 100.0) + "% window (need 3)");
    }
    report.mean_log_residual = sum / static_cast<double>(report.points);
    if (report.mean_log_residual < -tolerance) {
        report.verdict = Verdict::undervalued;
    } else if (report.mean_log_residual > tolerance) {
        report.verdict = Verdict::overvalued;
    }
    return report;
}

double extrapolate_breakthrough(const PowerLawReference& ref, double fraction) {
    if (!(fraction > 0.0 && fraction < ref.anchor_lo.fraction)) {
        throw DomainError("breakthrough fraction must lie in (0, x_lo)");
    }
    const double g_hi = ref.anchor_hi.fraction * ref.global_size;
    return ref.anchor_hi.count * std::pow(fraction * ref.global_size / g_hi, ref.alpha);
}

} // namespace citerank
