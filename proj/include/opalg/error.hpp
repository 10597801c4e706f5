#pragma once

#include <stdexcept>
#include <string>

namespace opalg {

/// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or dimensions that do not fit together, or exceed the dense cap.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An input violates an operation's precondition (bad state, bad morphism, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A numerical decision could not be made reliably (spectral gap ambiguity).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed text input; line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace opalg
