#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace citerank::csv {

// Minimal RFC 4180 reader: quoted fields, doubled quotes, embedded
// delimiters and newlines inside quotes, CRLF. Lines starting with '#'
// before the header are metadata and skipped. A UTF-8 BOM is stripped.
class Reader {
public:
    Reader(std::istream& in, char delimiter);

    /// Header row; empty when the stream holds no header at all.
    const std::vector<std::string>& header() const noexcept { return header_; }

    /// Next data record, or nullopt at end of stream. Blank lines are skipped.
    std::optional<std::vector<std::string>> next();

    /// 1-based index of the last record returned by next().
    std::size_t row() const noexcept { return row_; }

    /// Position of `name` in the header, or nullopt.
    std::optional<std::size_t> column(std::string_view name) const;

private:
    bool read_record(std::vector<std::string>& fields);

    std::istream& in_;
    char delimiter_;
    std::vector<std::string> header_;
    std::size_t row_ = 0;
};

/// Quotes a field if it contains the delimiter, a quote, or a newline.
std::string escape(std::string_view field, char delimiter = ',');

/// Joins escaped fields with the delimiter (no trailing newline).
std::string join(const std::vector<std::string>& fields, char delimiter = ',');

} // namespace citerank::csv
