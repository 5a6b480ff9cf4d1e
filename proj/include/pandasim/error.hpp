#pragma once

#include <stdexcept>
#include <string>

namespace pandasim {

/// Invalid or inconsistent configuration (bad fractions, unknown keys, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}
    /// 1-based line in the source file, 0 when unknown.
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Argument outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Least-squares fit could not be computed (singular design, too few samples).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data file (sweep CSV, bundle). Carries the 1-based row.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, long row) : std::runtime_error(what), row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

/// A file could not be read, written or renamed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pandasim
