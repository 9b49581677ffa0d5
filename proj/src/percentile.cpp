#include "citerank/percentile.hpp"

#include "citerank/error.hpp"

namespace citerank {

PercentileThreshold percentile_threshold(const RankedCorpus& corpus, double level) {
    if (!(level > 0.0 && level < 100.0)) {
        throw DomainError("percentile level must lie in (0, 100), got " + std::to_string(level));
    }
    const auto cites = corpus.citations();
    const auto n = cites.size();
    if (n == 0) throw InsufficientDataError("percentile threshold of an empty corpus");

    const double mass = level / 100.0 * static_cast<double>(n);
    for (std::size_t begin = 0; begin < n;) {
        std::size_t end = begin + 1;
        while (end < n && cites[end] == cites[begin]) ++end;
        if (mass <= static_cast<double>(end)) {
            PercentileThreshold t;
            t.level = level;
            t.c_star = cites[begin];
            t.full_weight_above = begin;
            t.tied = end - begin;
            t.tie_fraction = (mass - static_cast<double>(begin)) / static_cast<double>(t.tied);
            return t;
        }
        begin = end;
    }
    throw InvariantError("percentile mass exceeds corpus size");
}

double top_percentile_count(const RankedCorpus& corpus, std::string_view group, const PercentileThreshold& threshold,
                            TieCounting counting) {
    const auto positions = corpus.group(group);
    if (group == kGlobal && counting == TieCounting::fractional) {
        return threshold.level / 100.0 * static_cast<double>(corpus.global_size());
    }
    const auto cites = corpus.citations();
    std::size_t above = 0;
    std::size_t tied = 0;
    for (auto pos : positions) {
        const auto c = cites[pos];
        if (c > threshold.c_star) {
            ++above;
        } else if (c == threshold.c_star) {
            ++tied;
        }
    }
    const double tie_weight = counting == TieCounting::fractional ? threshold.tie_fraction : 1.0;
    return static_cast<double>(above) + static_cast<double>(tied) * tie_weight;
}

double top_percentile_count(const RankedCorpus& corpus, std::string_view group, double level, TieCounting counting) {
    if (!corpus.has_group(group)) throw LookupError("unknown group '" + std::string(group) + "'");
    return top_percentile_count(corpus, group, percentile_threshold(corpus, level), counting);
}

RatioTriple ratios_from_counts(double papers, const TopCounts& top, double min_top1_for_r3) {
    RatioTriple r;
    if (papers > 0.0) r.r1 = top.top10 / papers;
    if (top.top50 > 0.0) r.r2 = top.top5 / top.top50;
    if (top.top10 > 0.0 && top.top1 >= min_top1_for_r3) r.r3 = top.top1 / top.top10;
    return r;
}

PercentileSet indicator_set(const RankedCorpus& corpus, std::string_view group, const IndicatorOptions& options) {
    const auto positions = corpus.group(group);
    if (positions.empty()) throw InsufficientDataError("group '" + std::string(group) + "' has no papers");

    PercentileSet set;
    set.group = std::string(group);
    set.papers = positions.size();
    auto count = [&](double level) {
        return top_percentile_count(corpus, group, percentile_threshold(corpus, level), options.counting);
    };
    set.top.top50 = count(50.0);
    set.top.top10 = count(10.0);
    set.top.top5 = count(5.0);
    set.top.top1 = count(1.0);
    set.ratios = ratios_from_counts(static_cast<double>(set.papers), set.top, options.min_top1_for_r3);
    if (!set.ratios.r1) set.flags |= kR1NotCalculable;
    if (!set.ratios.r2) set.flags |= kR2NotCalculable;
    if (!set.ratios.r3) set.flags |= kR3NotCalculable;
    return set;
}

std::string describe_flags(unsigned flags) {
    std::string out;
    auto add = [&](unsigned bit, const char* name) {
        if (!(flags & bit)) return;
        if (!out.empty()) out.push_back(';');
        out += name;
    };
    add(kR1NotCalculable, "R1_not_calculable");
    add(kR2NotCalculable, "R2_not_calculable");
    add(kR3NotCalculable, "R3_not_calculable");
    return out;
}

} // namespace citerank
