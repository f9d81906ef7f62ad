#pragma once

#include <stdexcept>
#include <string>

namespace stocksent {

// Error taxonomy aligned with the CLI exit contract:
// 2 = usage/configuration, 3 = data/input, 4 = numerical failure.
class Error : public std::runtime_error {
public:
    Error(const std::string& msg, int exit_code)
        : std::runtime_error(msg), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg, 2) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg, 3) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg, 4) {}
};

class ConfigError : public UsageError {
public:
    explicit ConfigError(const std::string& msg) : UsageError(msg) {}
};

// Input file violates the expected schema (missing or unknown column).
class SchemaError : public DataError {
public:
    explicit SchemaError(const std::string& msg) : DataError(msg) {}
};

// A specific line or row failed to parse; carries a 1-based line number.
class ParseError : public DataError {
public:
    ParseError(const std::string& msg, long line)
        : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

class DuplicateError : public DataError {
public:
    explicit DuplicateError(const std::string& msg) : DataError(msg) {}
};

class InsufficientDataError : public DataError {
public:
    explicit InsufficientDataError(const std::string& msg) : DataError(msg) {}
};

class ValidationError : public DataError {
public:
    explicit ValidationError(const std::string& msg) : DataError(msg) {}
};

// Checkpoint file missing, malformed, or written by an incompatible version.
class CheckpointError : public DataError {
public:
    explicit CheckpointError(const std::string& msg) : DataError(msg) {}
};

class ShapeError : public NumericError {
public:
    explicit ShapeError(const std::string& msg) : NumericError(msg) {}
};

// Training loss became non-finite; carries the offending epoch (0-based).
class DivergenceError : public NumericError {
public:
    DivergenceError(const std::string& msg, int epoch)
        : NumericError(msg + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

class FitError : public NumericError {
public:
    explicit FitError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace stocksent
