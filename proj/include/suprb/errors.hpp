#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace suprb {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value lies outside its declared range (normalization bounds, [-1, 1]).
class OutOfRangeError : public Error {
public:
    OutOfRangeError(const std::string& what, std::size_t dimension)
        : Error(what), dimension_(dimension) {}

    std::size_t dimension() const noexcept { return dimension_; }

private:
    std::size_t dimension_;
};

/// Invalid configuration value or key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Vectors or datasets whose dimensions do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An operation was called on an object that is not in the required state.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Least-squares fit requested on zero rows.
class EmptyDataError : public Error {
public:
    using Error::Error;
};

/// Mixing was requested over an empty match set.
class NoCoverageError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; `offset` is the byte position where parsing failed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace suprb
