#pragma once

#include <stdexcept>
#include <string>

namespace learngrad {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class EmptyBatch : public Error {
public:
    using Error::Error;
};

class IncompatibleSpecs : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class UnsupportedHead : public Error {
public:
    using Error::Error;
};

class TraceMismatch : public Error {
public:
    using Error::Error;
};

class DegenerateGradient : public Error {
public:
    using Error::Error;
};

class NonMonotonicEpoch : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

// row/column are 1-based and count data rows, not the header line
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& what)
        : Error("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what),
          row(row),
          column(column) {}
    std::size_t row;
    std::size_t column;
};

class MissingTarget : public Error {
public:
    using Error::Error;
};

class EmptyFile : public Error {
public:
    using Error::Error;
};

class ZeroVariance : public Error {
public:
    explicit ZeroVariance(const std::string& feature)
        : Error("feature '" + feature + "' has zero variance"), feature(feature) {}
    std::string feature;
};

class DegenerateSplit : public Error {
public:
    using Error::Error;
};

class EmptyDataset : public Error {
public:
    using Error::Error;
};

class MalformedReport : public Error {
public:
    using Error::Error;
};

// flag/argument problems; the CLI maps this to exit code 2
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace learngrad
