#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "citerank/corpus.hpp"
#include "citerank/tails.hpp"

namespace citerank {

/// Target of the exact power-law generator.
struct SyntheticSpec {
    std::size_t global_size = 100000; // G
    std::size_t group_size = 1000;    // target P
    double alpha = 1.0;
    LognormalParams lognormal{3.0, 1.1, 0, 0};
    std::uint64_t seed = 1;
    std::string group = "SYN";
    RankPolicy policy = RankPolicy::mean_of_ties;

    void validate() const;
};

/// Global citations are lognormal draws; the paper at global position g
/// joins the group whenever floor(P * (g / G)^alpha) increments, so the
/// group's local rank tracks P * (g / G)^alpha within one rank everywhere.
///
/// Throws DomainError when the curve would need more than one group paper
/// at a single global position (local ranks cannot outrun global ranks),
/// or when the group comes out empty.
RankedCorpus make_power_law_corpus(const SyntheticSpec& spec);

/// Group and rest drawn from lognormals sharing sigma, the group shifted by
/// `mu_shift` in log space. Statistical, not exact: the double rank is only
/// approximately a power law.
RankedCorpus make_lognormal_shift_corpus(const SyntheticSpec& spec, double mu_shift);

/// Where injected changes land.
enum class InjectionScope {
    group_and_global, // new papers enter the global pool too
    group_only,       // global pool untouched; existing papers are relabeled
};

/// Adds `extra` papers with citations drawn uniformly from {0, 1, 2}.
/// In group_only scope the group instead recruits existing non-member
/// papers with those citation counts, so global thresholds do not move.
RankedCorpus inject_inflated_lower_tail(const RankedCorpus& corpus, std::string_view group, std::size_t extra,
                                        std::uint64_t seed,
                                        InjectionScope scope = InjectionScope::group_and_global);

struct DeflationResult {
    RankedCorpus corpus;
    std::size_t removed = 0;
    std::optional<std::string> warning;
};

/// Drops round(remove_fraction * n) of the group's n papers cited below the
/// global median citation count (strictly below the top-50% threshold)
/// from the group. The papers stay in the global pool.
DeflationResult inject_deflated_lower_tail(const RankedCorpus& corpus, std::string_view group,
                                           double remove_fraction, std::uint64_t seed);

/// Multiplies the citations of the group's `top_m` most cited papers by
/// `factor` (rounded) and re-ranks globally.
RankedCorpus inject_upper_tail_shift(const RankedCorpus& corpus, std::string_view group, std::size_t top_m,
                                     double factor);

} // namespace citerank
