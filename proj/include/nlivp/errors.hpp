#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlivp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// --- matrix -----------------------------------------------------------------

class NegativeEntryError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Raised where an operation requires a matrix convergent to zero.
class NotConvergentError : public Error {
public:
    using Error::Error;
};

/// The four convergence criteria disagreed away from the boundary band.
/// This always indicates a defect in the implementation.
class DisagreementOutsideBoundary : public Error {
public:
    using Error::Error;
};

// --- expressions ------------------------------------------------------------

class SyntaxError : public Error {
public:
    SyntaxError(std::string message, std::size_t offset, std::vector<std::string> expected)
        : Error(message), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class AbscissaOutOfRange : public Error {
public:
    using Error::Error;
};

class FreeTimeVariable : public Error {
public:
    using Error::Error;
};

/// Evaluation failure: division by zero, domain errors, unbound parameters.
class EvalError : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public EvalError {
public:
    using EvalError::EvalError;
};

class DomainError : public EvalError {
public:
    using EvalError::EvalError;
};

// --- space ------------------------------------------------------------------

class GridMismatch : public Error {
public:
    using Error::Error;
};

class InvalidGridFunction : public Error {
public:
    using Error::Error;
};

// --- hypotheses / solver / oracle -------------------------------------------

class NoBoundFound : public Error {
public:
    using Error::Error;
};

class NotContractive : public Error {
public:
    using Error::Error;
};

class NonFiniteState : public Error {
public:
    using Error::Error;
};

class NoRoot : public Error {
public:
    using Error::Error;
};

// --- configuration ----------------------------------------------------------

/// line() and column() are 0-based; the message shows them 1-based.
class ConfigError : public Error {
public:
    ConfigError(const std::string& message, int line = -1, int column = -1)
        : Error(line >= 0 ? message + " (line " + std::to_string(line + 1) + ", column " +
                                std::to_string(column + 1) + ")"
                          : message),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace nlivp
