#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nids {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

struct MalformedRowError : Error {
    MalformedRowError(std::size_t line, const std::string& what_arg)
        : Error(what_arg), line_no(line) {}
    std::size_t line_no;
};

struct UnknownLabelError : Error {
    UnknownLabelError(std::size_t line, std::string lbl, const std::string& what_arg)
        : Error(what_arg), line_no(line), label(std::move(lbl)) {}
    std::size_t line_no;
    std::string label;
};

struct InvalidFractionError : Error {
    using Error::Error;
};

struct EmptyDatasetError : Error {
    using Error::Error;
};

struct EmptyMatrixError : Error {
    using Error::Error;
};

struct NonNumericValueError : Error {
    NonNumericValueError(std::size_t r, std::size_t c, const std::string& what_arg)
        : Error(what_arg), row(r), col(c) {}
    std::size_t row;
    std::size_t col;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct ShapeMismatchError : Error {
    using Error::Error;
};

struct UninitializedStateError : Error {
    using Error::Error;
};

struct StaleCacheError : Error {
    using Error::Error;
};

struct LengthMismatchError : Error {
    using Error::Error;
};

struct OutOfRangeClassError : Error {
    using Error::Error;
};

struct DegenerateClassError : Error {
    DegenerateClassError(int c, const std::string& what_arg) : Error(what_arg), cls(c) {}
    int cls;
};

struct SchemaMismatchError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct NumericDivergenceError : Error {
    using Error::Error;
};

struct VersionMismatchError : Error {
    using Error::Error;
};

struct CorruptArtifactError : Error {
    using Error::Error;
};

}  // namespace nids
