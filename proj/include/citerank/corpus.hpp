#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace citerank {

/// Reserved label addressing the whole corpus.
inline constexpr std::string_view kGlobal = "GLOBAL";

using CitationCount = std::int64_t;

struct PaperRecord {
    std::string id;
    CitationCount citations = 0;
    std::vector<std::string> groups; // sorted, unique
};

/// How papers with equal citation counts share global ranks.
enum class RankPolicy {
    mean_of_ties, // 9,5,5,1 -> 1, 2.5, 2.5, 4
    min_of_ties,  // 9,5,5,1 -> 1, 2, 2, 4
};

std::string_view to_string(RankPolicy policy);
RankPolicy parse_rank_policy(std::string_view text);

struct CorpusSchema {
    std::string id_column = "id";
    std::string citations_column = "citations";
    std::vector<std::string> group_columns = {"group"};
    char delimiter = ',';
    /// Splits one group cell into several labels; '\0' disables splitting.
    char label_separator = ';';

    /// Throws SchemaError when column names collide or are empty.
    void validate() const;
};

/// Parses delimiter-separated text with a header row. Group labels of a
/// record are the non-empty values of the group columns.
std::vector<PaperRecord> load_corpus(std::istream& source, const CorpusSchema& schema);

/// Citation-sorted corpus with global ranks and per-group position indexes.
/// Immutable after construction.
class RankedCorpus {
public:
    RankedCorpus(std::vector<PaperRecord> sorted_papers, RankPolicy policy);

    std::span<const PaperRecord> papers() const noexcept { return papers_; }
    const PaperRecord& paper(std::size_t position) const { return papers_.at(position); }

    /// Citation counts in sorted (non-increasing) order.
    std::span<const CitationCount> citations() const noexcept { return citations_; }

    /// Global rank of the paper at a 0-based position, per rank_policy().
    double rank(std::size_t position) const { return ranks_.at(position); }
    std::span<const double> ranks() const noexcept { return ranks_; }

    std::size_t global_size() const noexcept { return papers_.size(); }
    RankPolicy rank_policy() const noexcept { return policy_; }

    bool has_group(std::string_view label) const;

    /// Ascending positions of the group's papers. GLOBAL yields every position.
    /// Throws LookupError for unknown labels.
    std::span<const std::size_t> group(std::string_view label) const;

    /// All labels that occur, sorted; GLOBAL is not included.
    std::vector<std::string> group_labels() const;

private:
    std::vector<PaperRecord> papers_;
    std::vector<CitationCount> citations_;
    std::vector<double> ranks_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> group_index_;
    std::vector<std::size_t> all_positions_;
    RankPolicy policy_;
};

/// Stable sort by citations descending, then rank per policy. Input order
/// breaks ties, so re-ranking a ranked sequence is the identity.
RankedCorpus rank_global(std::vector<PaperRecord> records, RankPolicy policy = RankPolicy::mean_of_ties);

/// Writes papers in the ingestible schema: all labels of a paper go to the
/// first group column, joined by the schema's label separator.
void write_corpus(std::ostream& out, std::span<const PaperRecord> papers, const CorpusSchema& schema);

} // namespace citerank
