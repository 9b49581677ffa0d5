#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace citerank {

/// Base of every error thrown by the library. The CLI maps the concrete
/// subclass to a process exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A required column is absent or a schema/mapping is malformed.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A single data row failed to parse. `row()` is the 1-based data row
/// (the header is not counted).
class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Input is well-formed row by row but inconsistent as a whole
/// (duplicate ids, reserved labels).
class IngestionError : public Error {
public:
    using Error::Error;
};

/// A numeric argument lies outside the operation's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Unknown group label or missing bin.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Too few papers, points, or periods for the requested computation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed. Indicates a bug, not bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace citerank
