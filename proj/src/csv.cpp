#include "citerank/csv.hpp"

#include "citerank/error.hpp"

namespace citerank::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {
    if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') {
        throw SchemaError("invalid CSV delimiter");
    }
    // metadata lines
    while (in_.peek() == '#') {
        std::string skipped;
        std::getline(in_, skipped);
    }
    std::vector<std::string> fields;
    while (read_record(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        header_ = std::move(fields);
        break;
    }
    if (!header_.empty() && header_[0].rfind("\xEF\xBB\xBF", 0) == 0) {
        header_[0].erase(0, 3);
    }
}

std::optional<std::vector<std::string>> Reader::next() {
    std::vector<std::string> fields;
    while (read_record(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        ++row_;
        return fields;
    }
    return std::nullopt;
}

std::optional<std::size_t> Reader::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    return std::nullopt;
}

bool Reader::read_record(std::vector<std::string>& fields) {
    fields.clear();
    int ch = in_.get();
    if (ch == std::char_traits<char>::eof()) return false;

    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (; ch != std::char_traits<char>::eof(); ch = in_.get()) {
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    field.push_back('"');
                    in_.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == delimiter_) {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\n') {
            break;
        } else if (c == '\r') {
            if (in_.peek() == '\n') in_.get();
            break;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw ParseError(row_ + 1, "unterminated quoted field");
    fields.push_back(std::move(field));
    return true;
}

std::string escape(std::string_view field, char delimiter) {
    const bool needs_quotes = field.find_first_of(std::string{'"', '\n', '\r', delimiter}) !=
                              std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join(const std::vector<std::string>& fields, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(delimiter);
        out += escape(fields[i], delimiter);
    }
    return out;
}

} // namespace citerank::csv
