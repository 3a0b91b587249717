#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mbdp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A size cap (backup output, enumeration budget) would be exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data: validation failures, bad indices,
// incomplete policies and the like.
class DataError : public Error {
public:
    using Error::Error;
};

// Conditioning on an observation that has zero probability.
class ImpossibleEvidence : public DataError {
public:
    using DataError::DataError;
};

// Evaluation of a policy tree that is missing a branch.
class EvaluationError : public DataError {
public:
    using DataError::DataError;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : DataError(format(what, line, column)), line_(line), column_(column) {}

    // Locates a byte offset of `text` as 1-based line and column.
    static ParseError at_offset(const std::string& what, const std::string& text, std::size_t offset) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < text.size() && i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        return ParseError(what, line, column);
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string out = "line " + std::to_string(line);
        if (column != 0) out += ", column " + std::to_string(column);
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

// Bad command line or configuration.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace mbdp
