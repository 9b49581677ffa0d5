#include "citerank/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_set>

#include "citerank/csv.hpp"
#include "citerank/error.hpp"

namespace citerank {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

CitationCount parse_citations(std::string_view raw, std::size_t row) {
    const auto text = trim(raw);
    if (text.empty()) throw ParseError(row, "empty citation count");
    CitationCount value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ParseError(row, "citation count '" + std::string(text) + "' is not an integer");
    }
    if (value < 0) {
        throw ParseError(row, "citation count " + std::string(text) + " is negative");
    }
    return value;
}

void add_labels(std::string_view cell, char separator, std::set<std::string>& labels) {
    if (separator == '\0') {
        if (auto label = trim(cell); !label.empty()) labels.emplace(label);
        return;
    }
    while (true) {
        const auto cut = cell.find(separator);
        if (auto label = trim(cell.substr(0, cut)); !label.empty()) labels.emplace(label);
        if (cut == std::string_view::npos) break;
        cell.remove_prefix(cut + 1);
    }
}

} // namespace

std::string_view to_string(RankPolicy policy) {
    return policy == RankPolicy::mean_of_ties ? "mean" : "min";
}

RankPolicy parse_rank_policy(std::string_view text) {
    if (text == "mean" || text == "mean-of-ties") return RankPolicy::mean_of_ties;
    if (text == "min" || text == "min-of-ties") return RankPolicy::min_of_ties;
    throw DomainError("unknown tie policy '" + std::string(text) + "' (expected mean or min)");
}

void CorpusSchema::validate() const {
    std::set<std::string> seen;
    auto check = [&](const std::string& name) {
        if (name.empty()) throw SchemaError("schema column names must be non-empty");
        if (!seen.insert(name).second) throw SchemaError("schema names column '" + name + "' twice");
    };
    check(id_column);
    check(citations_column);
    for (const auto& g : group_columns) check(g);
    if (delimiter == label_separator) throw SchemaError("label separator must differ from the delimiter");
}

std::vector<PaperRecord> load_corpus(std::istream& source, const CorpusSchema& schema) {
    schema.validate();
    csv::Reader reader(source, schema.delimiter);
    if (reader.header().empty()) throw SchemaError("corpus has no header row");

    auto require = [&](const std::string& name) {
        auto col = reader.column(name);
        if (!col) throw SchemaError("missing column '" + name + "'");
        return *col;
    };
    const auto id_col = require(schema.id_column);
    const auto cit_col = require(schema.citations_column);
    std::vector<std::size_t> group_cols;
    for (const auto& g : schema.group_columns) group_cols.push_back(require(g));

    std::vector<PaperRecord> records;
    std::unordered_set<std::string> ids;
    while (auto fields = reader.next()) {
        const auto row = reader.row();
        if (fields->size() != reader.header().size()) {
            throw ParseError(row, "expected " + std::to_string(reader.header().size()) + " fields, found " +
                                      std::to_string(fields->size()));
        }
        PaperRecord rec;
        rec.id = std::string(trim((*fields)[id_col]));
        if (rec.id.empty()) throw ParseError(row, "empty id");
        rec.citations = parse_citations((*fields)[cit_col], row);
        std::set<std::string> labels;
        for (auto c : group_cols) add_labels((*fields)[c], schema.label_separator, labels);
        rec.groups.assign(labels.begin(), labels.end());
        if (!ids.insert(rec.id).second) {
            throw IngestionError("duplicate id '" + rec.id + "' at row " + std::to_string(row));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

RankedCorpus::RankedCorpus(std::vector<PaperRecord> sorted_papers, RankPolicy policy)
    : papers_(std::move(sorted_papers)), policy_(policy) {
    const auto n = papers_.size();
    citations_.reserve(n);
    std::unordered_set<std::string_view> ids;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = papers_[i];
        if (p.citations < 0) throw InvariantError("negative citation count for '" + p.id + "'");
        if (i && p.citations > papers_[i - 1].citations) throw InvariantError("corpus is not sorted by citations");
        if (!ids.insert(p.id).second) throw IngestionError("duplicate id '" + p.id + "'");
        citations_.push_back(p.citations);
        for (const auto& label : p.groups) {
            if (label == kGlobal) throw IngestionError("group label GLOBAL is reserved");
            auto& positions = group_index_[label];
            if (positions.empty() || positions.back() != i) positions.push_back(i);
        }
    }

    ranks_.resize(n);
    for (std::size_t begin = 0; begin < n;) {
        std::size_t end = begin + 1;
        while (end < n && citations_[end] == citations_[begin]) ++end;
        // 1-based ranks begin+1 .. end share one value
        const double shared = policy == RankPolicy::mean_of_ties
                                  ? 0.5 * (static_cast<double>(begin + 1) + static_cast<double>(end))
                                  : static_cast<double>(begin + 1);
        std::fill(ranks_.begin() + static_cast<std::ptrdiff_t>(begin), ranks_.begin() + static_cast<std::ptrdiff_t>(end),
                  shared);
        begin = end;
    }

    all_positions_.resize(n);
    for (std::size_t i = 0; i < n; ++i) all_positions_[i] = i;
}

bool RankedCorpus::has_group(std::string_view label) const {
    return label == kGlobal || group_index_.find(label) != group_index_.end();
}

std::span<const std::size_t> RankedCorpus::group(std::string_view label) const {
    if (label == kGlobal) return all_positions_;
    const auto it = group_index_.find(label);
    if (it == group_index_.end()) throw LookupError("unknown group '" + std::string(label) + "'");
    return it->second;
}

std::vector<std::string> RankedCorpus::group_labels() const {
    std::vector<std::string> labels;
    labels.reserve(group_index_.size());
    for (const auto& [label, _] : group_index_) labels.push_back(label);
    return labels;
}

RankedCorpus rank_global(std::vector<PaperRecord> records, RankPolicy policy) {
    if (records.empty()) throw InsufficientDataError("cannot rank an empty corpus");
    std::stable_sort(records.begin(), records.end(),
                     [](const PaperRecord& a, const PaperRecord& b) { return a.citations > b.citations; });
    return RankedCorpus(std::move(records), policy);
}

void write_corpus(std::ostream& out, std::span<const PaperRecord> papers, const CorpusSchema& schema) {
    schema.validate();
    const char d = schema.delimiter;
    std::vector<std::string> header{schema.id_column, schema.citations_column};
    header.insert(header.end(), schema.group_columns.begin(), schema.group_columns.end());
    out << csv::join(header, d) << '\n';
    for (const auto& p : papers) {
        std::string labels;
        for (const auto& g : p.groups) {
            if (!labels.empty()) labels.push_back(schema.label_separator);
            labels += g;
        }
        std::vector<std::string> row{p.id, std::to_string(p.citations)};
        if (!schema.group_columns.empty()) {
            row.push_back(labels);
            row.resize(2 + schema.group_columns.size());
        }
        out << csv::join(row, d) << '\n';
    }
}

} // namespace citerank
