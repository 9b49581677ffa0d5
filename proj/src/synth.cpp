#include "citerank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "citerank/error.hpp"
#include "citerank/percentile.hpp"

namespace citerank {
namespace {

std::string padded_id(char prefix, std::size_t index, std::size_t total) {
    const auto width = std::to_string(total).size();
    auto digits = std::to_string(index);
    return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

void add_label(PaperRecord& paper, const std::string& label) {
    auto it = std::lower_bound(paper.groups.begin(), paper.groups.end(), label);
    if (it == paper.groups.end() || *it != label) paper.groups.insert(it, label);
}

void remove_label(PaperRecord& paper, std::string_view label) {
    auto it = std::lower_bound(paper.groups.begin(), paper.groups.end(), label);
    if (it != paper.groups.end() && *it == label) paper.groups.erase(it);
}

std::vector<PaperRecord> copy_papers(const RankedCorpus& corpus) {
    return {corpus.papers().begin(), corpus.papers().end()};
}

void require_member_group(const RankedCorpus& corpus, std::string_view group) {
    if (group == kGlobal) throw DomainError("injectors act on a named group, not GLOBAL");
    if (!corpus.has_group(group)) throw LookupError("unknown group '" + std::string(group) + "'");
}

} // namespace

void SyntheticSpec::validate() const {
    if (global_size == 0) throw DomainError("synthetic G must be at least 1");
    if (group_size < 1 || group_size > global_size) throw DomainError("synthetic group size must lie in [1, G]");
    if (!(alpha > 0.0)) throw DomainError("synthetic alpha must be positive");
    if (!(lognormal.sigma > 0.0)) throw DomainError("synthetic lognormal sigma must be positive");
    if (group.empty() || group == kGlobal) throw DomainError("synthetic group label must be a non-reserved name");
}

RankedCorpus make_power_law_corpus(const SyntheticSpec& spec) {
    spec.validate();
    auto draws = synth_lognormal(spec.global_size, spec.lognormal, spec.seed);
    std::sort(draws.begin(), draws.end(), std::greater<>());

    const double G = static_cast<double>(spec.global_size);
    const double P = static_cast<double>(spec.group_size);
    std::vector<PaperRecord> papers;
    papers.reserve(spec.global_size);
    long long previous = 0;
    for (std::size_t g = 1; g <= spec.global_size; ++g) {
        PaperRecord paper{padded_id('p', g, spec.global_size), draws[g - 1], {}};
        // the epsilon absorbs pow() rounding at exact integers
        const auto local = static_cast<long long>(std::floor(P * std::pow(static_cast<double>(g) / G, spec.alpha) + 1e-9));
        if (local - previous > 1) {
            throw DomainError("power law needs more than one group paper at global rank " + std::to_string(g) +
                              "; lower alpha or the group size");
        }
        if (local > previous) paper.groups.push_back(spec.group);
        previous = local;
        papers.push_back(std::move(paper));
    }
    if (previous == 0) throw DomainError("power-law construction produced an empty group");
    return RankedCorpus(std::move(papers), spec.policy);
}

RankedCorpus make_lognormal_shift_corpus(const SyntheticSpec& spec, double mu_shift) {
    spec.validate();
    std::vector<PaperRecord> papers;
    papers.reserve(spec.global_size);
    const auto rest = spec.global_size - spec.group_size;
    if (rest > 0) {
        const auto draws = synth_lognormal(rest, spec.lognormal, spec.seed);
        for (std::size_t i = 0; i < rest; ++i) papers.push_back({padded_id('r', i + 1, rest), draws[i], {}});
    }
    auto shifted = spec.lognormal;
    shifted.mu += mu_shift;
    const auto draws = synth_lognormal(spec.group_size, shifted, spec.seed ^ 0x9E3779B97F4A7C15ULL);
    for (std::size_t i = 0; i < spec.group_size; ++i) {
        papers.push_back({padded_id('g', i + 1, spec.group_size), draws[i], {spec.group}});
    }
    return rank_global(std::move(papers), spec.policy);
}

RankedCorpus inject_inflated_lower_tail(const RankedCorpus& corpus, std::string_view group, std::size_t extra,
                                        std::uint64_t seed, InjectionScope scope) {
    require_member_group(corpus, group);
    if (extra == 0) throw DomainError("inflation needs at least one extra paper");

    std::mt19937_64 engine(seed);
    std::uniform_int_distribution<int> low(0, 2);
    auto papers = copy_papers(corpus);
    const std::string label(group);

    if (scope == InjectionScope::group_only) {
        std::vector<std::size_t> pool[3];
        for (std::size_t i = 0; i < papers.size(); ++i) {
            const auto c = papers[i].citations;
            if (c <= 2 && !std::binary_search(papers[i].groups.begin(), papers[i].groups.end(), label)) {
                pool[c].push_back(i);
            }
        }
        std::size_t taken[3] = {0, 0, 0};
        for (std::size_t k = 0; k < extra; ++k) {
            const int v = low(engine);
            if (taken[v] == pool[v].size()) {
                throw InsufficientDataError("group-only inflation: no more non-member papers with " +
                                            std::to_string(v) + " citations to recruit");
            }
            add_label(papers[pool[v][taken[v]++]], label);
        }
        return RankedCorpus(std::move(papers), corpus.rank_policy());
    }

    std::unordered_set<std::string> ids;
    for (const auto& p : papers) ids.insert(p.id);
    std::size_t serial = 0;
    for (std::size_t k = 0; k < extra; ++k) {
        std::string id;
        do {
            id = "inflate-" + std::to_string(++serial);
        } while (ids.count(id));
        papers.push_back({std::move(id), static_cast<CitationCount>(low(engine)), {label}});
    }
    return rank_global(std::move(papers), corpus.rank_policy());
}

DeflationResult inject_deflated_lower_tail(const RankedCorpus& corpus, std::string_view group, double remove_fraction,
                                           std::uint64_t seed) {
    require_member_group(corpus, group);
    if (!(remove_fraction > 0.0 && remove_fraction < 1.0)) throw DomainError("remove_fraction must lie in (0, 1)");

    const auto median = percentile_threshold(corpus, 50.0);
    std::vector<std::size_t> below;
    for (auto pos : corpus.group(group)) {
        if (corpus.citations()[pos] < median.c_star) below.push_back(pos);
    }
    if (below.empty()) {
        return {corpus, 0, "group '" + std::string(group) + "' has no papers below the global median; unchanged"};
    }
    const auto k = static_cast<std::size_t>(std::llround(remove_fraction * static_cast<double>(below.size())));
    if (k == 0) {
        return {corpus, 0, "remove_fraction rounds to zero papers for group '" + std::string(group) + "'; unchanged"};
    }
    std::mt19937_64 engine(seed);
    std::shuffle(below.begin(), below.end(), engine);
    auto papers = copy_papers(corpus);
    for (std::size_t i = 0; i < k; ++i) remove_label(papers[below[i]], group);
    return {RankedCorpus(std::move(papers), corpus.rank_policy()), k, std::nullopt};
}

RankedCorpus inject_upper_tail_shift(const RankedCorpus& corpus, std::string_view group, std::size_t top_m,
                                     double factor) {
    require_member_group(corpus, group);
    const auto positions = corpus.group(group);
    if (top_m > positions.size()) throw DomainError("top_m exceeds the group size");
    if (!(factor > 0.0)) throw DomainError("shift factor must be positive");
    auto papers = copy_papers(corpus);
    for (std::size_t i = 0; i < top_m; ++i) {
        auto& p = papers[positions[i]];
        p.citations = std::llround(static_cast<double>(p.citations) * factor);
    }
    return rank_global(std::move(papers), corpus.rank_policy());
}

} // namespace citerank
