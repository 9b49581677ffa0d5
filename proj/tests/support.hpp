#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "citerank/corpus.hpp"

namespace testing_support {

using citerank::CitationCount;
using citerank::PaperRecord;

/// Records "p0", "p1", ... with the given citations; `labels[i]` (when
/// present and non-empty) becomes the single group of record i.
inline std::vector<PaperRecord> records(const std::vector<CitationCount>& citations,
                                        const std::vector<std::string>& labels = {}) {
    std::vector<PaperRecord> out;
    for (std::size_t i = 0; i < citations.size(); ++i) {
        PaperRecord p{"p" + std::to_string(i), citations[i], {}};
        if (i < labels.size() && !labels[i].empty()) p.groups.push_back(labels[i]);
        out.push_back(std::move(p));
    }
    return out;
}

/// Brute-force fractional top-x% count: a block of tied papers occupying
/// sorted positions [a, b) receives the part of [0, m) it overlaps, shared
/// equally among its members.
inline double oracle_top_count(const std::vector<CitationCount>& all, const std::vector<bool>& member, double level) {
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return all[a] > all[b]; });
    const double mass = level / 100.0 * static_cast<double>(all.size());
    double total = 0.0;
    std::size_t a = 0;
    while (a < order.size()) {
        std::size_t b = a;
        while (b < order.size() && all[order[b]] == all[order[a]]) ++b;
        const double overlap = std::clamp(mass - static_cast<double>(a), 0.0, static_cast<double>(b - a));
        const double each = overlap / static_cast<double>(b - a);
        for (std::size_t k = a; k < b; ++k) {
            if (member[order[k]]) total += each;
        }
        a = b;
    }
    return total;
}

/// Mean-of-ties rank from counting: (#greater) + (#equal + 1) / 2.
inline double oracle_mean_rank(const std::vector<CitationCount>& all, CitationCount c) {
    double greater = 0, equal = 0;
    for (auto v : all) {
        greater += v > c;
        equal += v == c;
    }
    return greater + (equal + 1.0) / 2.0;
}

/// Heavy-tied random citations: most values drawn from a small range.
inline std::vector<CitationCount> tied_citations(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> small(0, 12);
    std::geometric_distribution<int> tail(0.05);
    std::bernoulli_distribution pick_tail(0.2);
    std::vector<CitationCount> out(n);
    for (auto& c : out) c = pick_tail(rng) ? tail(rng) : small(rng);
    return out;
}

} // namespace testing_support
